use std::cell::RefCell;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::Ordering;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use clustercore::charverify::{
    cc_fiber_sweep, check_duality_dichotomy, count_w_strata, pair_admissible, verify_multiplication, ClusterFamily,
    StratumReport,
};
use clustercore::clustercat::{parse_sum, ObjectKey};
use clustercore::exactalg::{PrimeField, Rationals};
use clustercore::frobeniusfk::{fk_verify, validate_setup, FrobeniusFamily, FrobeniusSetup};
use clustercore::grasseuler::Sampling;
use clustercore::quiverrep::catalog::{IndecCatalog, DEFAULT_DIM_CAP};
use clustercore::quiverrep::ext::Ext1Space;
use clustercore::quiverrep::translate::{tau, tau_inverse};
use clustercore::quiverrep::{Algebra, MatrixRep, PathAlgebra};
use clustercore::textio::{QuiverFile, Record, ReportFile};
use clustercore::Error;

#[derive(Parser, Debug)]
#[command(name = "clustermult", version, about = "Cluster characters and exact checks of their multiplication formulas")]
struct Cli {
    /// Sampling primes beyond the minimum needed for interpolation.
    #[arg(long, global = true, env = "CLUSTERMULT_PRIMES", default_value_t = 0)]
    primes: usize,
    /// Dimension cap for the indecomposable catalog.
    #[arg(long, global = true, env = "CLUSTERMULT_CAP", default_value_t = DEFAULT_DIM_CAP)]
    cap: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List indecomposables with Hom and Ext¹ tables and AR translates.
    Catalog { file: PathBuf },
    /// Print the cluster character of an object (default: the file's summands).
    Char {
        file: PathBuf,
        object: Option<String>,
        /// Treat FILE as a Frobenius setup whose summands form T; print X′.
        #[arg(long, visible_alias = "fk", env = "CLUSTERMULT_FROBENIUS")]
        frobenius: bool,
    },
    /// Check the multiplication formula for the pair (L, M).
    Verify {
        file: PathBuf,
        l: String,
        m: String,
        /// Include one record per stratum.
        #[arg(long, env = "CLUSTERMULT_STRATA")]
        strata: bool,
        /// Include W-strata counts, the fiber and duality checks.
        #[arg(long, env = "CLUSTERMULT_WITNESS")]
        witness: bool,
        /// Frobenius version; FILE is a setup file whose summands form T.
        #[arg(long, visible_alias = "frobenius", env = "CLUSTERMULT_FK")]
        fk: bool,
    },
}

/// 1 identity failure or internal red flag, 2 bad input, 3 catalog overflow,
/// 4 counting failure, 5 unknown object, 6 inadmissible pair.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::InvalidInput(_)
        | Error::NotAdmissible(_)
        | Error::RelationViolation(_)
        | Error::ShapeMismatch(_)
        | Error::NotSelfInjective(_)
        | Error::NotRigid(_)
        | Error::NotBasic(_)
        | Error::Validation(_) => 2,
        Error::CatalogOverflow { .. } => 3,
        Error::NonPolynomialCount { .. }
        | Error::InsufficientSamples { .. }
        | Error::KeyMismatch { .. }
        | Error::BadReduction { .. } => 4,
        Error::UnknownObject(_) => 5,
        Error::InadmissiblePair(_) => 6,
        _ => 1,
    }
}

struct Input {
    file: QuiverFile,
    algebra: Arc<Algebra>,
}

fn load(path: &PathBuf) -> Result<Input, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
    let file = QuiverFile::parse(&text)?;
    let algebra = Arc::new(file.algebra()?);
    Ok(Input { file, algebra })
}

fn cluster_key(fam: &ClusterFamily, input: &Input, name: &str) -> Result<ObjectKey, Error> {
    let cat = fam.rational();
    let missing = RefCell::new(None);
    let key = parse_sum(name, cat.zero_key(), |term| {
        if let Some(k) = cat.key_by_name(term) {
            return Some(k);
        }
        match input.file.module(&input.algebra, term).and_then(|m| cat.key_of(&m, &vec![0; cat.n()])) {
            Ok(k) => Some(k),
            Err(e) => {
                *missing.borrow_mut() = Some(e);
                None
            }
        }
    });
    match (key, missing.into_inner()) {
        (Some(k), _) => Ok(k),
        (None, Some(Error::UnknownObject(_)) | None) => Err(Error::UnknownObject(name.to_string())),
        (None, Some(e)) => Err(e),
    }
}

fn frobenius_family(input: &Input, cap: usize, sampling: Sampling) -> Result<FrobeniusFamily, Error> {
    if input.file.summands.is_empty() {
        return Err(Error::Validation("setup file declares no summands of T".into()));
    }
    let pa = PathAlgebra::new(input.algebra.clone(), Rationals)?;
    let catalog = IndecCatalog::build(&pa, cap)?;
    let t = input
        .file
        .summands
        .iter()
        .map(|s| match catalog.position(s) {
            Some(i) => Ok(catalog.module(i).clone()),
            None => input.file.module(&input.algebra, s),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let setup = validate_setup(pa, &t, cap)?;
    FrobeniusFamily::from_setup(setup, cap, sampling)
}

fn frobenius_key(setup: &FrobeniusSetup<Rationals>, input: &Input, name: &str) -> Result<ObjectKey, Error> {
    parse_sum(name, setup.zero_key(), |term| {
        setup.key_by_name(term).or_else(|| input.file.module(&input.algebra, term).ok().and_then(|m| setup.key_of(&m).ok()))
    })
    .ok_or_else(|| Error::UnknownObject(name.to_string()))
}

fn default_object(input: &Input, object: Option<String>) -> Result<String, Error> {
    match object {
        Some(o) => Ok(o),
        None if !input.file.summands.is_empty() => Ok(input.file.summands.join(" + ")),
        None => Err(Error::UnknownObject("(none given)".into())),
    }
}

fn cmd_catalog(input: &Input, cap: usize) -> Result<String, Error> {
    let pa = PathAlgebra::new(input.algebra.clone(), Rationals)?;
    let cat = IndecCatalog::build(&pa, cap)?;
    let mut report = ReportFile::default();
    let mut head = Record::new("catalog");
    let arrows: Vec<String> = input.file.arrows.iter().map(|(a, s, t)| format!("{a}: {s} -> {t}")).collect();
    let printed = input.file.print();
    let relations: Vec<&str> = printed.lines().filter_map(|l| l.strip_prefix("relation: ")).collect();
    head.push("vertices", input.file.vertices)
        .push("arrows", arrows.join("; "))
        .push("relations", if relations.is_empty() { "none".to_string() } else { relations.join("; ") })
        .push("indecomposables", cat.len());
    report.records.push(head);
    let name_of = |m: &MatrixRep<Rationals>| cat.decompose(m).map(|d| cat.render(&d));
    for (i, m) in cat.modules().iter().enumerate() {
        let mut r = Record::new("module");
        let dims: Vec<String> = m.dims().iter().map(|d| d.to_string()).collect();
        let (t, ti) = (tau(&pa, m), tau_inverse(&pa, m));
        r.push("name", cat.name(i))
            .push("dims", dims.join(","))
            .push("tau", name_of(&t)?)
            .push("tau_inverse", name_of(&ti)?);
        let hom: Vec<String> = cat.gram()[i].iter().map(|d| d.to_string()).collect();
        let ext: Vec<String> = cat.modules().iter().map(|y| Ext1Space::new(m, y).dim().to_string()).collect();
        r.push("hom", hom.join(",")).push("ext1", ext.join(","));
        report.records.push(r);
    }
    Ok(report.render())
}

fn cmd_char(input: &Input, object: Option<String>, frobenius: bool, cap: usize, sampling: Sampling) -> Result<String, Error> {
    if frobenius {
        let fam = frobenius_family(input, cap, sampling)?;
        let name = object.ok_or_else(|| Error::UnknownObject("(none given)".into()))?;
        let key = frobenius_key(fam.rational(), input, &name)?;
        return Ok(format!("{}\n", fam.character(&key)?));
    }
    let fam = ClusterFamily::new(input.algebra.clone(), cap, sampling)?;
    let key = cluster_key(&fam, input, &default_object(input, object)?)?;
    Ok(format!("{}\n", fam.rational().character(&key)?))
}

fn witness_records(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey, strata: &[StratumReport], dir: &str, out: &mut String) -> Result<bool, Error> {
    let mut ok = true;
    for s in strata {
        let w = count_w_strata(fam, l, m, &s.key)?;
        ok &= w.star_star_holds() && w.index_bookkeeping;
        out.push_str(&format!("[witness]\ndirection = {dir}\n"));
        let mut body = String::new();
        w.render(&s.label, &mut body);
        out.push_str(body.strip_prefix("[witness]\n").unwrap_or(&body));
    }
    Ok(ok)
}

fn cmd_verify(input: &Input, l: &str, m: &str, strata: bool, witness: bool, cap: usize, sampling: Sampling) -> Result<(String, bool), Error> {
    let fam = ClusterFamily::new(input.algebra.clone(), cap, sampling)?;
    let (lk, mk) = (cluster_key(&fam, input, l)?, cluster_key(&fam, input, m)?);
    let (admissible, reason) = pair_admissible(&fam, &lk, &mk);
    if !admissible {
        return Err(Error::InadmissiblePair(reason));
    }
    let report = verify_multiplication(&fam, &lk, &mk)?;
    let mut out = report.render(strata);
    let mut ok = report.pass;
    if witness {
        ok &= witness_records(&fam, &lk, &mk, &report.strata_lm, "LM", &mut out)?;
        ok &= witness_records(&fam, &mk, &lk, &report.strata_ml, "ML", &mut out)?;
        let cc = cc_fiber_sweep(&fam, &lk, &mk, 1)?;
        let p = PrimeField::new(fam.sampling().primes(0)[0])?;
        let dual = check_duality_dichotomy(&fam, &lk, &mk, p)?;
        ok &= cc.failures == 0 && dual.holds();
        let mut r = Record::new("fibers");
        r.push("prime", p.modulus())
            .push("image_points", cc.image_points)
            .push("fiber_failures", cc.failures)
            .push("duality_triples", dual.triples)
            .push("duality_in_image", dual.in_image)
            .push("duality_mismatches", dual.mismatches);
        out.push_str(&ReportFile { records: vec![r] }.render());
    }
    let violations = fam.stats.coindex_violations.load(Ordering::Relaxed);
    ok &= violations == 0;
    let mut r = Record::new("checks");
    r.push("triangles", fam.stats.triangles.load(Ordering::Relaxed)).push("coindex_violations", violations);
    out.push_str(&ReportFile { records: vec![r] }.render());
    Ok((out, ok))
}

fn cmd_verify_fk(input: &Input, l: &str, m: &str, strata: bool, cap: usize, sampling: Sampling) -> Result<(String, bool), Error> {
    let fam = frobenius_family(input, cap, sampling)?;
    let (lk, mk) = (frobenius_key(fam.rational(), input, l)?, frobenius_key(fam.rational(), input, m)?);
    let report = fk_verify(&fam, &lk, &mk)?;
    let mut out = report.render(strata);
    let violations = fam.index_violations.load(Ordering::Relaxed);
    let mut r = Record::new("checks");
    r.push("conflations", fam.conflations.load(Ordering::Relaxed))
        .push("index_violations", violations)
        .push("assumption", "stable category taken to be 2-Calabi-Yau; T certified rigid, not maximal");
    out.push_str(&ReportFile { records: vec![r] }.render());
    Ok((out, report.pass && violations == 0))
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    let sampling = Sampling { extra_primes: cli.primes };
    match cli.cmd {
        Cmd::Catalog { file } => Ok((cmd_catalog(&load(&file)?, cli.cap)?, true)),
        Cmd::Char { file, object, frobenius } => Ok((cmd_char(&load(&file)?, object, frobenius, cli.cap, sampling)?, true)),
        Cmd::Verify { file, l, m, strata, witness, fk } => {
            let input = load(&file)?;
            if fk {
                cmd_verify_fk(&input, &l, &m, strata, cli.cap, sampling)
            } else {
                cmd_verify(&input, &l, &m, strata, witness, cli.cap, sampling)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("clustermult: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
