//! Stratification of `P C(L, ΣM)` by middle terms and the exact check of
//! the multiplication formula
//!
//! ```text
//! χ(P C(L,ΣM)) X_L X_M = ∫_{P C(L,ΣM)} X_{mt(ε)} + ∫_{P C(M,ΣL)} X_{mt(ε)}
//! ```
//!
//! together with the finer counts behind its proof: the sets `W_{e,f,g}` of
//! pairs (class, submodule of the F-image of its middle term), the fibers of
//! `ψ: ([ε], E) ↦ ([ε], (Fp)E, (Fi)⁻¹E)`, and the duality criterion for
//! triples outside the image of `ψ`.
//!
//! Counting happens over prime fields, one category per prime; characters
//! and Grassmannian profiles are computed once over the rationals.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::clustercat::{antisym_vector, f_image_sequence, ClusterCategory, ObjectKey, TriangleData};
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Field, LaurentPoly, PrimeField, Rationals};
use crate::grasseuler::{
    chi_of_buckets, echelon_rows, for_each_submodule, projective_points, sub_dimension_vectors, Sampling,
};
use crate::quiverrep::hom::{hom_dim, quotient_module};
use crate::quiverrep::{Algebra, MatrixRep};

/// Running totals over every triangle built by the verifier.
#[derive(Debug, Default)]
pub struct TriangleStats {
    pub triangles: AtomicU64,
    pub coindex_violations: AtomicU64,
}

/// The cluster category over the rationals and, lazily, over each sampling
/// prime. All catalogs must carry the same names in the same order, so that
/// object keys mean the same thing over every field.
#[derive(Debug)]
pub struct ClusterFamily {
    algebra: Arc<Algebra>,
    dim_cap: usize,
    rational: ClusterCategory<Rationals>,
    primes: Mutex<BTreeMap<u64, Arc<ClusterCategory<PrimeField>>>>,
    pub stats: TriangleStats,
}

impl ClusterFamily {
    pub fn new(algebra: Arc<Algebra>, dim_cap: usize, sampling: Sampling) -> Result<Self> {
        let rational = ClusterCategory::new(algebra.clone(), Rationals, dim_cap, sampling)?;
        Ok(ClusterFamily { algebra, dim_cap, rational, primes: Mutex::new(BTreeMap::new()), stats: TriangleStats::default() })
    }

    pub fn rational(&self) -> &ClusterCategory<Rationals> {
        &self.rational
    }

    pub fn sampling(&self) -> &Sampling {
        self.rational.sampling()
    }

    pub fn at_prime(&self, fp: PrimeField) -> Result<Arc<ClusterCategory<PrimeField>>> {
        if let Some(c) = self.primes.lock().expect("lock").get(&fp.modulus()) {
            return Ok(c.clone());
        }
        let c = ClusterCategory::new(self.algebra.clone(), fp, self.dim_cap, *self.sampling())?;
        if c.catalog().names() != self.rational.catalog().names() {
            return Err(Error::KeyMismatch {
                prime: fp.modulus(),
                detail: format!("catalog {:?} differs from {:?}", c.catalog().names(), self.rational.catalog().names()),
            });
        }
        let c = Arc::new(c);
        self.primes.lock().expect("lock").insert(fp.modulus(), c.clone());
        Ok(c)
    }

    pub fn render(&self, key: &ObjectKey) -> String {
        self.rational.render(key)
    }

    fn record_triangle<F: Field>(&self, cat: &ClusterCategory<F>, l: &ObjectKey, m: &ObjectKey, t: &TriangleData<F>) -> Result<Vec<usize>> {
        let seq = f_image_sequence(t)?;
        self.stats.triangles.fetch_add(1, Ordering::Relaxed);
        if !coindex_lemma_holds(cat, l, m, &t.y, &seq.g) {
            self.stats.coindex_violations.fetch_add(1, Ordering::Relaxed);
        }
        Ok(seq.g)
    }
}

/// `coi Y = coi(L ⊕ M) − Σ ⟨S_i, g⟩_a [P_i]`.
pub fn coindex_lemma_holds<F: Field>(cat: &ClusterCategory<F>, l: &ObjectKey, m: &ObjectKey, y: &ObjectKey, g: &[usize]) -> bool {
    let lhs = cat.coindex(y);
    let base = cat.coindex(&l.sum(m));
    let corr = antisym_vector(cat.quiver(), &g.iter().map(|&x| x as i64).collect::<Vec<_>>());
    lhs.iter().zip(base.iter().zip(&corr)).all(|(a, (b, c))| *a == b - c)
}

/// Whether every class in `C(L, ΣM)` and `C(M, ΣL)` is pure.
pub fn pair_admissible(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey) -> (bool, String) {
    fam.rational.admissibility(l, m)
}

/// Stratum key: coindex and decomposition of the middle term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumKey {
    /// Coindex (triangulated) or index (Frobenius) of the middle term.
    pub class: Vec<i64>,
    pub middle_term: ObjectKey,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumReport {
    pub key: StratumKey,
    pub label: String,
    pub chi: BigInt,
    pub counts: Vec<(u64, BigInt)>,
    /// Coordinates of the first class found in this stratum over the smallest prime.
    pub representative: Vec<u64>,
    pub chi_profile: Vec<(Vec<usize>, BigInt)>,
    pub character: LaurentPoly,
}

fn field_point(p: &[u64]) -> Vec<u64> {
    p.to_vec()
}

/// Iterate the classes of `P C(L, ΣM)(F_p)` with their triangles.
fn for_each_class(
    fam: &ClusterFamily,
    fp: PrimeField,
    l: &ObjectKey,
    m: &ObjectKey,
    mut visit: impl FnMut(&ClusterCategory<PrimeField>, &[u64], &TriangleData<PrimeField>, &[usize]) -> Result<()>,
) -> Result<()> {
    let cat = fam.at_prime(fp)?;
    let (lo, mo) = (cat.object(l)?, cat.object(m)?);
    let space = cat.shift_space(&lo, &mo);
    for pt in projective_points(fp, space.dim()) {
        let eps = space.class(&field_point(&pt));
        let t = cat.middle_term(&lo, &mo, &space, &eps)?;
        let g = fam.record_triangle(&cat, l, m, &t)?;
        visit(&cat, &pt, &t, &g)?;
    }
    Ok(())
}

fn require_admissible(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey) -> Result<()> {
    let (ok, reason) = pair_admissible(fam, l, m);
    if ok {
        Ok(())
    } else {
        Err(Error::InadmissiblePair(reason))
    }
}

/// Bucket `P C(L, ΣM)` by middle term and read off each bucket's `χ`.
pub fn stratify_ext(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey) -> Result<Vec<StratumReport>> {
    require_admissible(fam, l, m)?;
    let d = fam.rational.hom_dim(l, m, 1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let buckets = chi_of_buckets(d - 1, fam.sampling(), |fp| {
        let mut counts: BTreeMap<StratumKey, u64> = BTreeMap::new();
        for_each_class(fam, fp, l, m, |cat, _, t, _| {
            *counts.entry(StratumKey { class: cat.coindex(&t.y), middle_term: t.y.clone() }).or_default() += 1;
            Ok(())
        })?;
        Ok(counts)
    })?;
    let p0 = PrimeField::new(buckets[0].counts[0].0)?;
    let mut reps: BTreeMap<StratumKey, Vec<u64>> = BTreeMap::new();
    for_each_class(fam, p0, l, m, |cat, pt, t, _| {
        reps.entry(StratumKey { class: cat.coindex(&t.y), middle_term: t.y.clone() }).or_insert_with(|| pt.to_vec());
        Ok(())
    })?;
    buckets
        .into_iter()
        .map(|b| {
            let y = &b.key.middle_term;
            Ok(StratumReport {
                label: fam.render(y),
                chi: b.chi,
                counts: b.counts,
                representative: reps.remove(&b.key).unwrap_or_default(),
                chi_profile: fam.rational.chi_profile(y)?,
                character: fam.rational.character(y)?,
                key: b.key,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// `triangulated` or `frobenius`.
    pub formula: &'static str,
    pub l: String,
    pub m: String,
    pub dim: usize,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    pub strata_lm: Vec<StratumReport>,
    pub strata_ml: Vec<StratumReport>,
    pub primes: Vec<u64>,
    pub pass: bool,
}

/// Check the multiplication formula for `(L, M)` exactly.
pub fn verify_multiplication(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey) -> Result<VerificationReport> {
    require_admissible(fam, l, m)?;
    let cat = &fam.rational;
    let d = cat.hom_dim(l, m, 1);
    let lhs = (&cat.character(l)? * &cat.character(m)?).scale(&BigInt::from(d));
    let strata_lm = stratify_ext(fam, l, m)?;
    let strata_ml = stratify_ext(fam, m, l)?;
    let mut rhs = LaurentPoly::zero(cat.n());
    for s in strata_lm.iter().chain(&strata_ml) {
        rhs = &rhs + &s.character.scale(&s.chi);
    }
    let primes = if d == 0 { Vec::new() } else { fam.sampling().primes(d - 1) };
    Ok(VerificationReport {
        formula: "triangulated",
        l: fam.render(l),
        m: fam.render(m),
        dim: d,
        pass: lhs == rhs,
        lhs,
        rhs,
        strata_lm,
        strata_ml,
        primes,
    })
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl StratumReport {
    pub fn render(&self, direction: &str, out: &mut String) {
        let _ = writeln!(out, "[stratum]");
        let _ = writeln!(out, "direction = {direction}");
        let _ = writeln!(out, "middle_term = {}", self.label);
        let _ = writeln!(out, "class = {}", join(&self.key.class, ","));
        let _ = writeln!(out, "chi = {}", self.chi);
        let counts: Vec<String> = self.counts.iter().map(|(p, c)| format!("{p}:{c}")).collect();
        let _ = writeln!(out, "counts = {}", counts.join(","));
        let _ = writeln!(out, "representative = {}", join(&self.representative, ","));
        let profile: Vec<String> =
            self.chi_profile.iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| format!("{}:{c}", join(e, "."))).collect();
        let _ = writeln!(out, "chi_profile = {}", profile.join(","));
        let _ = writeln!(out, "character = {}", self.character);
    }
}

impl VerificationReport {
    /// Key-value report; `strata` adds one record per stratum.
    pub fn render(&self, strata: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[verify]");
        let _ = writeln!(out, "formula = {}", self.formula);
        let _ = writeln!(out, "L = {}", self.l);
        let _ = writeln!(out, "M = {}", self.m);
        let _ = writeln!(out, "dim = {}", self.dim);
        let _ = writeln!(out, "primes = {}", join(&self.primes, ","));
        let _ = writeln!(out, "lhs = {}", self.lhs);
        let _ = writeln!(out, "rhs = {}", self.rhs);
        let lm: Vec<String> = self.strata_lm.iter().map(|s| format!("{}:{}", s.label, s.chi)).collect();
        let ml: Vec<String> = self.strata_ml.iter().map(|s| format!("{}:{}", s.label, s.chi)).collect();
        let _ = writeln!(out, "strata_lm = {}", lm.join("; "));
        let _ = writeln!(out, "strata_ml = {}", ml.join("; "));
        let _ = writeln!(out, "pass = {}", self.pass);
        if strata {
            for s in &self.strata_lm {
                s.render("LM", &mut out);
            }
            for s in &self.strata_ml {
                s.render("ML", &mut out);
            }
        }
        out
    }
}

/// `(e, f, g)`: dimension vectors of `(Fp)E`, `(Fi)⁻¹E` and `E`.
pub type WKey = (Vec<usize>, Vec<usize>, Vec<usize>);

fn rank_of(m: &ExactMatrix<PrimeField>) -> usize {
    m.rank()
}

/// `(dim (Fp)E, dim (Fi)⁻¹E)` for a submodule `E ⊆ FY` given by column bases.
fn psi_dims(t: &TriangleData<PrimeField>, e: &[Option<ExactMatrix<PrimeField>>]) -> (Vec<usize>, Vec<usize>) {
    let mut fe = Vec::new();
    let mut ff = Vec::new();
    for (v, b) in e.iter().enumerate() {
        let b = b.as_ref().expect("complete point");
        fe.push(rank_of(&t.fp.blocks[v].mul(b)));
        ff.push(t.fm.dim(v) + b.cols() - rank_of(&t.fi.blocks[v].hstack(b)));
    }
    (fe, ff)
}

/// Canonical form of a subspace, for hashing.
type SubKey = Vec<Vec<u64>>;

fn sub_key(basis: &ExactMatrix<PrimeField>) -> SubKey {
    let r = echelon_rows(basis);
    (0..r.rows()).map(|i| r.row(i)).collect()
}

/// `((Fp)E, (Fi)⁻¹E)` as canonical subspaces of `FL` and `FM`.
fn psi(t: &TriangleData<PrimeField>, e: &[Option<ExactMatrix<PrimeField>>]) -> (Vec<SubKey>, Vec<SubKey>) {
    let mut u = Vec::new();
    let mut w = Vec::new();
    for (v, b) in e.iter().enumerate() {
        let b = b.as_ref().expect("complete point");
        u.push(sub_key(&t.fp.blocks[v].mul(b).column_space()));
        // preimage: kernel of FM -> FY/E
        let fi = &t.fi.blocks[v];
        let combined = fi.hstack(b);
        let k = combined.kernel_matrix();
        let rows: Vec<usize> = (0..fi.cols()).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        w.push(sub_key(&k.submatrix(&rows, &cols).column_space()));
    }
    (u, w)
}

/// The `W_{e,f,g}` counts over one stratum and the checks built on them.
#[derive(Clone, Debug)]
pub struct WReport {
    pub stratum_chi: BigInt,
    pub table: Vec<(WKey, BigInt)>,
    /// `(g, Σ_{e,f} χ(W_{e,f,g}), χ(stratum) χ(Gr_g FY))`.
    pub star_star: Vec<(Vec<usize>, BigInt, BigInt)>,
    pub index_bookkeeping: bool,
}

impl WReport {
    pub fn star_star_holds(&self) -> bool {
        self.star_star.iter().all(|(_, a, b)| a == b)
    }

    pub fn render(&self, label: &str, out: &mut String) {
        let _ = writeln!(out, "[witness]");
        let _ = writeln!(out, "middle_term = {label}");
        let _ = writeln!(out, "stratum_chi = {}", self.stratum_chi);
        for ((e, f, g), c) in &self.table {
            let _ = writeln!(out, "W {} {} {} = {c}", join(e, "."), join(f, "."), join(g, "."));
        }
        for (g, a, b) in &self.star_star {
            let _ = writeln!(out, "star_star {} = {a} vs {b}", join(g, "."));
        }
        let _ = writeln!(out, "star_star_ok = {}", self.star_star_holds());
        let _ = writeln!(out, "index_bookkeeping_ok = {}", self.index_bookkeeping);
    }
}

fn max_grassmannian_bound(dims: &[usize]) -> usize {
    dims.iter().map(|d| d * d / 4).sum()
}

/// Count pairs `([ε], E)` with `ε` in the stratum of `key` and `E ⊆ F mt(ε)`,
/// bucketed by `(e, f, g)`.
pub fn count_w_strata(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey, key: &StratumKey) -> Result<WReport> {
    require_admissible(fam, l, m)?;
    let cat = &fam.rational;
    let d = cat.hom_dim(l, m, 1);
    let strata = stratify_ext(fam, l, m)?;
    let stratum = strata
        .iter()
        .find(|s| &s.key == key)
        .ok_or_else(|| Error::InvalidInput(format!("no stratum with middle term {}", fam.render(&key.middle_term))))?;
    let fy_dims = cat.module_dims(&key.middle_term);
    let bound = d.saturating_sub(1) + max_grassmannian_bound(&fy_dims);
    let buckets = chi_of_buckets(bound, fam.sampling(), |fp| {
        let mut counts: BTreeMap<WKey, u64> = BTreeMap::new();
        for_each_class(fam, fp, l, m, |c, _, t, _| {
            if c.coindex(&t.y) != key.class || t.y != key.middle_term {
                return Ok(());
            }
            for g in sub_dimension_vectors(t.fy.dims()) {
                for_each_submodule(&t.fy, &g, &mut |e| {
                    let (de, df) = psi_dims(t, e);
                    *counts.entry((de, df, g.clone())).or_default() += 1;
                });
            }
            Ok(())
        })?;
        Ok(counts)
    })?;
    let table: Vec<(WKey, BigInt)> = buckets.into_iter().map(|b| (b.key, b.chi)).collect();
    let profile: BTreeMap<Vec<usize>, BigInt> = cat.chi_profile(&key.middle_term)?.into_iter().collect();
    let mut sums: BTreeMap<Vec<usize>, BigInt> = profile.keys().map(|g| (g.clone(), BigInt::zero())).collect();
    for ((_, _, g), c) in &table {
        *sums.entry(g.clone()).or_default() += c;
    }
    let star_star = sums
        .into_iter()
        .map(|(g, s)| {
            let expect = &stratum.chi * profile.get(&g).cloned().unwrap_or_default();
            (g, s, expect)
        })
        .collect();
    let q = cat.quiver();
    let coi_lm = cat.coindex(&l.sum(m));
    let coi_y = &key.class;
    let to_i = |v: &[usize]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
    let index_bookkeeping = table.iter().all(|((e, f, g), _)| {
        let ef: Vec<i64> = e.iter().zip(f).map(|(a, b)| (a + b) as i64).collect();
        let lhs: Vec<i64> = antisym_vector(q, &ef).iter().zip(&coi_lm).map(|(a, b)| a - b).collect();
        let rhs: Vec<i64> = antisym_vector(q, &to_i(g)).iter().zip(coi_y).map(|(a, b)| a - b).collect();
        lhs == rhs
    });
    Ok(WReport { stratum_chi: stratum.chi.clone(), table, star_star, index_bookkeeping })
}

/// Fiber of `ψ` over `([ε], U, V)` against `|Hom(U, FM/V)|`, for one
/// triangle over `F_p`. `u ⊆ FL` and `v ⊆ FM` are column bases.
pub fn check_cc_fiber(t: &TriangleData<PrimeField>, u: &[ExactMatrix<PrimeField>], v: &[ExactMatrix<PrimeField>]) -> bool {
    let target = (u.iter().map(sub_key).collect::<Vec<_>>(), v.iter().map(sub_key).collect::<Vec<_>>());
    let mut fiber = 0u64;
    for g in sub_dimension_vectors(t.fy.dims()) {
        for_each_submodule(&t.fy, &g, &mut |e| {
            if psi(t, e) == target {
                fiber += 1;
            }
        });
    }
    fiber == expected_fiber(t, u, v)
}

fn expected_fiber(t: &TriangleData<PrimeField>, u: &[ExactMatrix<PrimeField>], v: &[ExactMatrix<PrimeField>]) -> u64 {
    let p = t.fm.field().modulus();
    let um = t.fl.restrict(u).expect("submodule");
    let (w, _) = quotient_module(&t.fm, v);
    p.pow(hom_dim(&um, &w) as u32)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CcSummary {
    pub image_points: u64,
    pub failures: u64,
}

/// For every class and every image point of `ψ`, compare the fiber size with
/// `p^{dim Hom(U, FM/V)}`, over the first `n_primes` sampling primes.
pub fn cc_fiber_sweep(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey, n_primes: usize) -> Result<CcSummary> {
    require_admissible(fam, l, m)?;
    let mut summary = CcSummary::default();
    for p in fam.sampling().primes(0).into_iter().take(n_primes) {
        for_each_class(fam, PrimeField::new(p)?, l, m, |_, _, t, _| {
            let mut groups: HashMap<(Vec<SubKey>, Vec<SubKey>), (u64, Vec<ExactMatrix<PrimeField>>, Vec<ExactMatrix<PrimeField>>)> =
                HashMap::new();
            for g in sub_dimension_vectors(t.fy.dims()) {
                for_each_submodule(&t.fy, &g, &mut |e| {
                    let key = psi(t, e);
                    let entry = groups.entry(key).or_insert_with(|| {
                        let (u, v) = psi_bases(t, e);
                        (0, u, v)
                    });
                    entry.0 += 1;
                });
            }
            for (count, u, v) in groups.values() {
                summary.image_points += 1;
                if *count != expected_fiber(t, u, v) {
                    summary.failures += 1;
                }
            }
            Ok(())
        })?;
    }
    Ok(summary)
}

fn psi_bases(t: &TriangleData<PrimeField>, e: &[Option<ExactMatrix<PrimeField>>]) -> (Vec<ExactMatrix<PrimeField>>, Vec<ExactMatrix<PrimeField>>) {
    let mut u = Vec::new();
    let mut w = Vec::new();
    for (v, b) in e.iter().enumerate() {
        let b = b.as_ref().expect("complete point");
        u.push(t.fp.blocks[v].mul(b).column_space());
        let fi = &t.fi.blocks[v];
        let k = fi.hstack(b).kernel_matrix();
        let rows: Vec<usize> = (0..fi.cols()).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        w.push(k.submatrix(&rows, &cols).column_space());
    }
    (u, w)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualityReport {
    pub triples: u64,
    pub in_image: u64,
    pub mismatches: u64,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }
}

/// All submodules of `m` as canonical subspace keys.
fn all_submodules(m: &MatrixRep<PrimeField>) -> Vec<Vec<SubKey>> {
    let mut out = Vec::new();
    for g in sub_dimension_vectors(m.dims()) {
        for_each_submodule(m, &g, &mut |e| out.push(e.iter().map(|b| sub_key(b.as_ref().expect("complete"))).collect()));
    }
    out
}

/// Over `F_p`: a triple `([ε], U ⊆ FL, V ⊆ FM)` lies outside the image of
/// `ψ` iff some `η ∈ C(M, ΣL)` pairs nontrivially with `ε` and has a
/// submodule `E` of its middle term with `(Fi)⁻¹E = U` and `(Fp)E = V`.
pub fn check_duality_dichotomy(fam: &ClusterFamily, l: &ObjectKey, m: &ObjectKey, fp: PrimeField) -> Result<DualityReport> {
    require_admissible(fam, l, m)?;
    let cat = fam.at_prime(fp)?;
    let (lo, mo) = (cat.object(l)?, cat.object(m)?);
    let pairing = cat.serre_pairing(&lo, &mo)?;
    let mut image: HashSet<(usize, Vec<SubKey>, Vec<SubKey>)> = HashSet::new();
    let mut eps_points = Vec::new();
    for_each_class(fam, fp, l, m, |_, pt, t, _| {
        let idx = eps_points.len();
        eps_points.push(pt.to_vec());
        for g in sub_dimension_vectors(t.fy.dims()) {
            for_each_submodule(&t.fy, &g, &mut |e| {
                let (u, v) = psi(t, e);
                image.insert((idx, u, v));
            });
        }
        Ok(())
    })?;
    // for η: L -> N -> M, realized pairs ((Fi)⁻¹E ⊆ FL, (Fp)E ⊆ FM)
    let mut realized: Vec<(Vec<u64>, BTreeSet<(Vec<SubKey>, Vec<SubKey>)>)> = Vec::new();
    for_each_class(fam, fp, m, l, |_, pt, t, _| {
        let mut set = BTreeSet::new();
        for g in sub_dimension_vectors(t.fy.dims()) {
            for_each_submodule(&t.fy, &g, &mut |e| {
                let (to_m, from_l) = psi(t, e);
                set.insert((from_l, to_m));
            });
        }
        realized.push((pt.to_vec(), set));
        Ok(())
    })?;
    let subs_l = all_submodules(&lo.module_part);
    let subs_m = all_submodules(&mo.module_part);
    let mut report = DualityReport::default();
    for (idx, eps) in eps_points.iter().enumerate() {
        let partners: Vec<&BTreeSet<_>> =
            realized.iter().filter(|(eta, _)| !fp.is_zero(&pairing.evaluate(eps, eta))).map(|(_, s)| s).collect();
        for u in &subs_l {
            for v in &subs_m {
                report.triples += 1;
                let key = (idx, u.clone(), v.clone());
                let in_image = image.contains(&key);
                if in_image {
                    report.in_image += 1;
                }
                let witnessed = partners.iter().any(|s| s.contains(&(u.clone(), v.clone())));
                if in_image == witnessed {
                    report.mismatches += 1;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverrep::linear_a;

    fn a2() -> ClusterFamily {
        ClusterFamily::new(Arc::new(linear_a(2)), 16, Sampling::default()).unwrap()
    }

    fn key(fam: &ClusterFamily, name: &str) -> ObjectKey {
        fam.rational().key_by_name(name).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        let fam = a2();
        assert!(pair_admissible(&fam, &key(&fam, "S1"), &key(&fam, "S2")).0);
        assert!(pair_admissible(&fam, &key(&fam, "P1"), &key(&fam, "P1")).0);
        let s1s2 = key(&fam, "S1").sum(&key(&fam, "S2"));
        let (ok, reason) = pair_admissible(&fam, &s1s2, &s1s2);
        assert!(!ok);
        assert!(reason.starts_with("mixed classes possible"));
    }

    #[test]
    fn s1_s2_on_a2() {
        let fam = a2();
        let (s1, s2) = (key(&fam, "S1"), key(&fam, "S2"));
        let strata = stratify_ext(&fam, &s1, &s2).unwrap();
        assert_eq!(strata.len(), 1);
        assert_eq!(strata[0].label, "P1");
        assert_eq!(strata[0].chi, BigInt::from(1));
        let r = verify_multiplication(&fam, &s1, &s2).unwrap();
        assert!(r.pass, "{}", r.render(true));
        let back: Vec<String> = r.strata_ml.iter().map(|s| s.label.clone()).collect();
        assert_eq!(back, vec!["0"]);
        assert!(stratify_ext(&fam, &s1, &s1).unwrap().is_empty());
    }

    #[test]
    fn witness_counts_on_a2() {
        let fam = a2();
        let (s1, s2) = (key(&fam, "S1"), key(&fam, "S2"));
        let strata = stratify_ext(&fam, &s1, &s2).unwrap();
        let w = count_w_strata(&fam, &s1, &s2, &strata[0].key).unwrap();
        assert!(w.star_star_holds());
        assert!(w.index_bookkeeping);
        let g01 = w.star_star.iter().find(|(g, _, _)| g == &vec![0, 1]).unwrap();
        assert_eq!(g01.1, BigInt::from(1));
        let cc = cc_fiber_sweep(&fam, &s1, &s2, 2).unwrap();
        assert!(cc.image_points > 0);
        assert_eq!(cc.failures, 0);
        let d = check_duality_dichotomy(&fam, &s1, &s2, PrimeField::new(5).unwrap()).unwrap();
        assert!(d.holds(), "{d:?}");
    }
}
