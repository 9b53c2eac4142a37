//! Fu–Keller characters on `mod Λ` for a self-injective algebra `Λ` with a
//! cluster tilting module `T = T_1 ⊕ … ⊕ T_n` whose last `n − r` summands
//! are the projective-injectives.
//!
//! `A = End(T)` is presented by the quiver with one arrow `i -> j` for each
//! irreducible map `T_j -> T_i` in `add T`; an arrow acts on `FM = Hom(T, M)`
//! by precomposition, so `F T_i` is the projective `A`-module at `i`.
//!
//! ```text
//! X′_M = x^{ind M} Σ_e χ(Gr_e(GM)) ∏_i x_i^{−⟨e, S_i⟩_3},    G = Ext¹(T, −)
//! ```

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::charverify::{StratumKey, StratumReport, VerificationReport};
use crate::clustercat::{parse_sum, ObjectKey};
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Field, LaurentPoly, PrimeField, Rationals};
use crate::grasseuler::{chi_of_buckets, chi_quiver_grassmannian, projective_points, sub_dimension_vectors, Sampling};
use crate::quiverrep::catalog::{indecomposables_isomorphic, IndecCatalog};
use crate::quiverrep::ext::Ext1Space;
use crate::quiverrep::hom::{hom_space, kernel_module, naive_cokernel, summand_projection};
use crate::quiverrep::translate::{ext_dim, injective_envelope};
use crate::quiverrep::{Algebra, MatrixRep, ModMap, PathAlgebra, Quiver, Relation, RelationSet};

const MAX_RELATION_LENGTH: usize = 12;

fn flat_len<F: Field>(m: &ModMap<F>) -> usize {
    m.blocks.iter().map(|b| b.rows() * b.cols()).sum()
}

fn columns<F: Field>(field: &F, len: usize, maps: &[ModMap<F>]) -> ExactMatrix<F> {
    ExactMatrix::from_columns(field.clone(), len, &maps.iter().map(|m| m.flatten()).collect::<Vec<_>>())
}

/// Indices of `candidates` extending the span of `base`, chosen greedily.
fn greedy_complement<F: Field>(field: &F, len: usize, base: &[ModMap<F>], candidates: &[ModMap<F>]) -> Vec<usize> {
    let mut cols: Vec<Vec<F::Elem>> = base.iter().map(|m| m.flatten()).collect();
    let mut rank = ExactMatrix::from_columns(field.clone(), len, &cols).rank();
    let mut out = Vec::new();
    for (k, c) in candidates.iter().enumerate() {
        cols.push(c.flatten());
        let r = ExactMatrix::from_columns(field.clone(), len, &cols).rank();
        if r > rank {
            rank = r;
            out.push(k);
        } else {
            cols.pop();
        }
    }
    out
}

/// Coordinates of `f` in the basis `basis`.
fn coordinates<F: Field>(field: &F, basis: &[ModMap<F>], f: &ModMap<F>) -> Result<Vec<F::Elem>> {
    let len = flat_len(f);
    columns(field, len, basis)
        .solve(&f.flatten())?
        .ok_or_else(|| Error::DecompositionFailure("map outside the span of the Hom basis".into()))
}

/// `Λ` with a validated `T`, over one field.
#[derive(Debug)]
pub struct FrobeniusSetup<F: Field> {
    pa: PathAlgebra<F>,
    catalog: IndecCatalog<F>,
    t: Vec<usize>,
    r: usize,
    /// `rad[x][y]`: basis of the radical maps `T_x -> T_y`.
    rad: Vec<Vec<Vec<ModMap<F>>>>,
}

/// Certify self-injectivity, basicness, the position of the projectives and
/// rigidity of `T`, then tabulate the radical of `add T`.
pub fn validate_setup<F: Field>(pa: PathAlgebra<F>, t: &[MatrixRep<F>], dim_cap: usize) -> Result<FrobeniusSetup<F>> {
    let n_lambda = pa.n();
    let injectives: Vec<MatrixRep<F>> = (0..n_lambda).map(|v| pa.injective(v)).collect();
    for v in 0..n_lambda {
        let p = pa.projective(v);
        if !injectives.iter().any(|i| indecomposables_isomorphic(&p, i)) {
            return Err(Error::NotSelfInjective(format!("P{} is not injective", v + 1)));
        }
    }
    let catalog = IndecCatalog::build(&pa, dim_cap)?;
    let mut idx = Vec::new();
    for (k, m) in t.iter().enumerate() {
        let mults = catalog.decompose(m)?;
        if mults.iter().sum::<usize>() != 1 {
            return Err(Error::NotBasic(format!("T{} = {} is not indecomposable", k + 1, catalog.render(&mults))));
        }
        let i = mults.iter().position(|&c| c == 1).expect("one summand");
        if idx.contains(&i) {
            return Err(Error::NotBasic(format!("{} occurs twice in T", catalog.name(i))));
        }
        idx.push(i);
    }
    for v in 0..n_lambda {
        if !idx.contains(&catalog.projective_index(v)) {
            return Err(Error::Validation(format!("T does not contain the projective P{}", v + 1)));
        }
    }
    let r = idx.iter().filter(|&&i| catalog.projective_vertex(i).is_none()).count();
    if idx[..r].iter().any(|&i| catalog.projective_vertex(i).is_some()) {
        return Err(Error::Validation("projective summands of T must come last".into()));
    }
    for &a in &idx {
        for &b in &idx {
            if !Ext1Space::new(catalog.module(a), catalog.module(b)).is_zero() {
                return Err(Error::NotRigid(format!("Ext¹({}, {}) ≠ 0", catalog.name(a), catalog.name(b))));
            }
        }
    }
    let field = pa.field().clone();
    let mods: Vec<&MatrixRep<F>> = idx.iter().map(|&i| catalog.module(i)).collect();
    let n = idx.len();
    let mut rad = vec![vec![Vec::new(); n]; n];
    for x in 0..n {
        for y in 0..n {
            let h = hom_space(mods[x], mods[y]);
            rad[x][y] = if x != y { h } else { endomorphism_radical(&field, mods[x], &h, catalog.name(idx[x]))? };
        }
    }
    Ok(FrobeniusSetup { pa, catalog, t: idx, r, rad })
}

/// Kernel of `f ↦ λ` for `f = λ·1 + nilpotent` on a split local endomorphism ring.
fn endomorphism_radical<F: Field>(field: &F, m: &MatrixRep<F>, basis: &[ModMap<F>], name: &str) -> Result<Vec<ModMap<F>>> {
    let v = m.dims().iter().position(|&d| d > 0).expect("nonzero module");
    let mut lambdas = Vec::new();
    for b in basis {
        let mut ev = field.eigenvalues(&b.blocks[v]);
        ev.dedup_by(|a, b| field.is_zero(&field.sub(a, b)));
        match ev.as_slice() {
            [l] => lambdas.push(l.clone()),
            _ => return Err(Error::Validation(format!("End({name}) is not split local"))),
        }
    }
    let row = ExactMatrix::from_rows(field.clone(), basis.len(), vec![lambdas])?;
    let dims = m.dims();
    Ok(row.kernel_basis().iter().map(|c| ModMap::combination(field, c, basis, dims, dims)).collect())
}

impl<F: Field> FrobeniusSetup<F> {
    /// `T` given by catalog names, e.g. `["S1", "P1", "P2"]`.
    pub fn from_names(algebra: Arc<Algebra>, field: F, names: &[&str], dim_cap: usize) -> Result<Self> {
        let pa = PathAlgebra::new(algebra, field)?;
        let catalog = IndecCatalog::build(&pa, dim_cap)?;
        let t = names
            .iter()
            .map(|s| catalog.position(s.trim()).map(|i| catalog.module(i).clone()).ok_or_else(|| Error::UnknownObject(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        validate_setup(pa, &t, dim_cap)
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> &F {
        self.pa.field()
    }

    pub fn path_algebra(&self) -> &PathAlgebra<F> {
        &self.pa
    }

    pub fn catalog(&self) -> &IndecCatalog<F> {
        &self.catalog
    }

    pub fn t_module(&self, i: usize) -> &MatrixRep<F> {
        self.catalog.module(self.t[i])
    }

    pub fn t_names(&self) -> Vec<String> {
        self.t.iter().map(|&i| self.catalog.name(i).to_string()).collect()
    }

    pub fn zero_key(&self) -> ObjectKey {
        ObjectKey { summands: vec![0; self.catalog.len()], shifts: Vec::new() }
    }

    pub fn t_key(&self, i: usize) -> ObjectKey {
        let mut k = self.zero_key();
        k.summands[self.t[i]] = 1;
        k
    }

    pub fn key_by_name(&self, name: &str) -> Option<ObjectKey> {
        parse_sum(name, self.zero_key(), |term| {
            self.catalog.position(term).map(|i| {
                let mut k = self.zero_key();
                k.summands[i] = 1;
                k
            })
        })
    }

    pub fn key_of(&self, m: &MatrixRep<F>) -> Result<ObjectKey> {
        Ok(ObjectKey { summands: self.catalog.decompose(m)?, shifts: Vec::new() })
    }

    pub fn render(&self, key: &ObjectKey) -> String {
        self.catalog.render(&key.summands)
    }

    /// Direct sum in catalog order.
    pub fn module_of(&self, key: &ObjectKey) -> MatrixRep<F> {
        let parts: Vec<&MatrixRep<F>> = key
            .summands
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(self.catalog.module(i), c))
            .collect();
        MatrixRep::direct_sum_all(self.pa.algebra().clone(), self.field().clone(), parts)
    }

    /// `[T_0] − [T_1]` from the minimal right `add T`-approximation
    /// `0 -> T_1 -> T_0 -> M -> 0`.
    pub fn fk_index(&self, m: &MatrixRep<F>) -> Result<Vec<i64>> {
        let field = self.field().clone();
        let n = self.n();
        let homs: Vec<Vec<ModMap<F>>> = (0..n).map(|x| hom_space(self.t_module(x), m)).collect();
        let mut slots = Vec::new();
        let mut maps = Vec::new();
        for x in 0..n {
            let len = self.t_module(x).dims().iter().zip(m.dims()).map(|(a, b)| a * b).sum();
            let mut radical = Vec::new();
            for z in 0..n {
                for g in &homs[z] {
                    for f in &self.rad[x][z] {
                        radical.push(g.compose(f));
                    }
                }
            }
            for k in greedy_complement(&field, len, &radical, &homs[x]) {
                slots.push(x);
                maps.push(homs[x][k].clone());
            }
        }
        let parts: Vec<&MatrixRep<F>> = slots.iter().map(|&x| self.t_module(x)).collect();
        let t0 = MatrixRep::direct_sum_all(self.pa.algebra().clone(), field.clone(), parts.iter().copied());
        let part_dims: Vec<&[usize]> = parts.iter().map(|p| p.dims()).collect();
        let mut map = ModMap::zero(&field, t0.dims(), m.dims());
        for (k, g) in maps.iter().enumerate() {
            map = map.add(&g.compose(&summand_projection(&field, &part_dims, k)));
        }
        if map.blocks.iter().zip(m.dims()).any(|(b, &d)| b.rank() != d) {
            return Err(Error::ApproximationFailure("T_0 -> M is not surjective".into()));
        }
        let (kernel, _) = kernel_module(&t0, &map);
        let mults = self.catalog.decompose(&kernel)?;
        let mut index = vec![0i64; n];
        for &x in &slots {
            index[x] += 1;
        }
        for (i, &c) in mults.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let x = self.t.iter().position(|&j| j == i).ok_or_else(|| {
                Error::ApproximationFailure(format!("kernel {} is not in add T", self.catalog.render(&mults)))
            })?;
            index[x] -= c as i64;
        }
        Ok(index)
    }

    /// Dimension vector of `coker Hom(T, p)` for `p: Y -> L`.
    pub fn coker_dims(&self, y: &MatrixRep<F>, l: &MatrixRep<F>, p: &ModMap<F>) -> Vec<usize> {
        let field = self.field();
        (0..self.n())
            .map(|x| {
                let tx = self.t_module(x);
                let len = tx.dims().iter().zip(l.dims()).map(|(a, b)| a * b).sum();
                let image: Vec<ModMap<F>> = hom_space(tx, y).iter().map(|g| p.compose(g)).collect();
                hom_space(tx, l).len() - columns(field, len, &image).rank()
            })
            .collect()
    }
}

/// The presentation of `A = End(T)` and the functors `F`, `G` into `mod A`.
#[derive(Debug)]
pub struct EndAlgebra {
    algebra: Arc<Algebra>,
    pa: PathAlgebra<Rationals>,
    /// Arrow `i -> j` acts by precomposition with `phi[a]: T_j -> T_i`.
    phi: Vec<ModMap<Rationals>>,
    /// `form[j][i] = ⟨S_j, S_i⟩_3`.
    form: Vec<Vec<i64>>,
}

fn integer_relation(coeffs: &[BigRational]) -> Result<Vec<i64>> {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.iter()
        .map(|c| (c / &g).to_i64().ok_or_else(|| Error::InvalidInput("relation coefficient overflows i64".into())))
        .collect()
}

impl EndAlgebra {
    pub fn new(setup: &FrobeniusSetup<Rationals>) -> Result<Self> {
        let field = Rationals;
        let n = setup.n();
        let mods: Vec<&MatrixRep<Rationals>> = (0..n).map(|x| setup.t_module(x)).collect();
        let len = |x: usize, y: usize| mods[x].dims().iter().zip(mods[y].dims()).map(|(a, b)| a * b).sum::<usize>();
        let mut quiver = Quiver::new(n);
        let mut phi = Vec::new();
        for i in 0..n {
            for j in 0..n {
                // irreducible maps T_j -> T_i: rad modulo rad²
                let mut rad2 = Vec::new();
                for z in 0..n {
                    for f in &setup.rad[j][z] {
                        for g in &setup.rad[z][i] {
                            rad2.push(g.compose(f));
                        }
                    }
                }
                for k in greedy_complement(&field, len(j, i), &rad2, &setup.rad[j][i]) {
                    quiver.add_arrow(&format!("a{}", phi.len() + 1), i, j)?;
                    phi.push(setup.rad[j][i][k].clone());
                }
            }
        }
        let relations = Self::relations(&quiver, &phi, &mods)?;
        let algebra = Arc::new(Algebra::new(quiver, relations)?);
        let pa = PathAlgebra::new(algebra.clone(), field)?;
        let expected: usize = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| hom_space(mods[x], mods[y]).len()).sum();
        if pa.dim() != expected {
            return Err(Error::Validation(format!("End(T) presentation has dimension {}, expected {expected}", pa.dim())));
        }
        let mut form = vec![vec![0i64; n]; n];
        for (j, row) in form.iter_mut().enumerate() {
            let sj = MatrixRep::simple(algebra.clone(), field, j);
            for (i, v) in row.iter_mut().enumerate() {
                *v = truncated_euler(&pa, &sj, &MatrixRep::simple(algebra.clone(), field, i));
            }
        }
        Ok(EndAlgebra { algebra, pa, phi, form })
    }

    /// The kernel of path evaluation, up to the first length at which every
    /// path evaluates to zero.
    fn relations(quiver: &Quiver, phi: &[ModMap<Rationals>], mods: &[&MatrixRep<Rationals>]) -> Result<RelationSet> {
        let field = Rationals;
        let mut layer: Vec<(Vec<usize>, ModMap<Rationals>)> =
            (0..phi.len()).map(|a| (vec![a], phi[a].clone())).collect();
        let mut by_ends: BTreeMap<(usize, usize), Vec<(Vec<usize>, ModMap<Rationals>)>> = BTreeMap::new();
        for len in 2.. {
            if len > MAX_RELATION_LENGTH {
                return Err(Error::Validation("End(T) has non-vanishing paths beyond the supported length".into()));
            }
            let mut next = Vec::new();
            for (p, m) in &layer {
                let end = quiver.arrow(*p.last().expect("nonempty")).target;
                for a in quiver.arrows_from(end) {
                    let mut q = p.clone();
                    q.push(a);
                    next.push((q, m.compose(&phi[a])));
                }
            }
            if next.is_empty() {
                break;
            }
            let all_zero = next.iter().all(|(_, m)| m.is_zero());
            for (p, m) in &next {
                let ends = quiver.path_ends(p).expect("composable");
                by_ends.entry(ends).or_default().push((p.clone(), m.clone()));
            }
            if all_zero {
                break;
            }
            layer = next;
        }
        let mut relations = Vec::new();
        for ((s, t), paths) in by_ends {
            let len: usize = mods[t].dims().iter().zip(mods[s].dims()).map(|(a, b)| a * b).sum();
            let maps: Vec<ModMap<Rationals>> = paths.iter().map(|(_, m)| m.clone()).collect();
            for k in columns(&field, len, &maps).kernel_basis() {
                let coeffs = integer_relation(&k)?;
                let terms = coeffs.iter().zip(&paths).filter(|(c, _)| **c != 0).map(|(c, (p, _))| (*c, p.clone())).collect();
                relations.push(Relation { terms });
            }
        }
        Ok(RelationSet { relations })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn path_algebra(&self) -> &PathAlgebra<Rationals> {
        &self.pa
    }

    /// `⟨e, S_i⟩_3`, linear in `e`.
    pub fn truncated_form(&self, e: &[usize], i: usize) -> i64 {
        e.iter().zip(&self.form).map(|(&c, row)| c as i64 * row[i]).sum()
    }

    /// `FN` with the Hom bases used for its coordinates.
    fn f_module_with_bases(
        &self,
        setup: &FrobeniusSetup<Rationals>,
        m: &MatrixRep<Rationals>,
    ) -> Result<(MatrixRep<Rationals>, Vec<Vec<ModMap<Rationals>>>)> {
        let n = setup.n();
        let bases: Vec<Vec<ModMap<Rationals>>> = (0..n).map(|x| hom_space(setup.t_module(x), m)).collect();
        let q = self.algebra.quiver();
        let mut mats = Vec::new();
        for (a, arrow) in q.arrows().iter().enumerate() {
            let cols = bases[arrow.source]
                .iter()
                .map(|g| coordinates(&Rationals, &bases[arrow.target], &g.compose(&self.phi[a])))
                .collect::<Result<Vec<_>>>()?;
            mats.push(ExactMatrix::from_columns(Rationals, bases[arrow.target].len(), &cols));
        }
        let dims = bases.iter().map(|b| b.len()).collect();
        Ok((MatrixRep::new(self.algebra.clone(), Rationals, dims, mats)?, bases))
    }

    pub fn f_module(&self, setup: &FrobeniusSetup<Rationals>, m: &MatrixRep<Rationals>) -> Result<MatrixRep<Rationals>> {
        Ok(self.f_module_with_bases(setup, m)?.0)
    }

    /// `GM = coker(F I -> F C)` for `0 -> M -> I -> C -> 0` with `I` the
    /// injective envelope; asserted to be a module over `B = A/⟨e_{r+1}, …⟩`.
    pub fn g_module(&self, setup: &FrobeniusSetup<Rationals>, m: &MatrixRep<Rationals>) -> Result<MatrixRep<Rationals>> {
        let env = injective_envelope(&setup.pa, m);
        let (c, pi) = naive_cokernel(&env.module, &env.map);
        let (fi, bi) = self.f_module_with_bases(setup, &env.module)?;
        let (fc, bc) = self.f_module_with_bases(setup, &c)?;
        let blocks = (0..setup.n())
            .map(|x| {
                let cols = bi[x].iter().map(|g| coordinates(&Rationals, &bc[x], &pi.compose(g))).collect::<Result<Vec<_>>>()?;
                Ok(ExactMatrix::from_columns(Rationals, bc[x].len(), &cols))
            })
            .collect::<Result<Vec<_>>>()?;
        let fpi = ModMap { blocks };
        debug_assert!(fpi.is_morphism(&fi, &fc));
        let (gm, _) = naive_cokernel(&fc, &fpi);
        if gm.dims()[setup.r()..].iter().any(|&d| d > 0) {
            return Err(Error::Validation(format!(
                "GM has composition factors at projective-injective vertices (dims {:?})",
                gm.dims()
            )));
        }
        Ok(gm)
    }
}

/// `Σ_{k=0}^{3} (−1)^k dim Ext^k(l, y)`.
pub fn truncated_euler<F: Field>(pa: &PathAlgebra<F>, l: &MatrixRep<F>, y: &MatrixRep<F>) -> i64 {
    let mut v = hom_space(l, y).len() as i64;
    for k in 1..=3 {
        let d = ext_dim(pa, k, l, y) as i64;
        v += if k % 2 == 1 { -d } else { d };
    }
    v
}

/// Result of the `⟨,⟩_3` well-definedness sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormCheck {
    pub modules: usize,
    pub comparisons: usize,
    pub failures: Vec<String>,
}

type Profile = Vec<(Vec<usize>, BigInt)>;

/// A validated setup over `ℚ` plus its reductions modulo the sampling primes.
#[derive(Debug)]
pub struct FrobeniusFamily {
    algebra: Arc<Algebra>,
    t_names: Vec<String>,
    dim_cap: usize,
    sampling: Sampling,
    rational: FrobeniusSetup<Rationals>,
    end: EndAlgebra,
    primes: Mutex<BTreeMap<u64, Arc<FrobeniusSetup<PrimeField>>>>,
    characters: Mutex<HashMap<ObjectKey, (Profile, LaurentPoly)>>,
    pub conflations: AtomicU64,
    pub index_violations: AtomicU64,
}

impl FrobeniusFamily {
    pub fn new(algebra: Arc<Algebra>, t_names: &[&str], dim_cap: usize, sampling: Sampling) -> Result<Self> {
        let rational = FrobeniusSetup::from_names(algebra.clone(), Rationals, t_names, dim_cap)?;
        Self::from_setup(rational, dim_cap, sampling)
    }

    pub fn from_setup(rational: FrobeniusSetup<Rationals>, dim_cap: usize, sampling: Sampling) -> Result<Self> {
        let end = EndAlgebra::new(&rational)?;
        Ok(FrobeniusFamily {
            algebra: rational.pa.algebra().clone(),
            t_names: rational.t_names(),
            dim_cap,
            sampling,
            rational,
            end,
            primes: Mutex::new(BTreeMap::new()),
            characters: Mutex::new(HashMap::new()),
            conflations: AtomicU64::new(0),
            index_violations: AtomicU64::new(0),
        })
    }

    pub fn rational(&self) -> &FrobeniusSetup<Rationals> {
        &self.rational
    }

    pub fn end_algebra(&self) -> &EndAlgebra {
        &self.end
    }

    pub fn sampling(&self) -> &Sampling {
        &self.sampling
    }

    pub fn at_prime(&self, fp: PrimeField) -> Result<Arc<FrobeniusSetup<PrimeField>>> {
        if let Some(s) = self.primes.lock().expect("lock").get(&fp.modulus()) {
            return Ok(s.clone());
        }
        let names: Vec<&str> = self.t_names.iter().map(|s| s.as_str()).collect();
        let s = FrobeniusSetup::from_names(self.algebra.clone(), fp, &names, self.dim_cap)?;
        if s.catalog.names() != self.rational.catalog.names() {
            return Err(Error::KeyMismatch {
                prime: fp.modulus(),
                detail: format!("catalog {:?} differs from {:?}", s.catalog.names(), self.rational.catalog.names()),
            });
        }
        let s = Arc::new(s);
        self.primes.lock().expect("lock").insert(fp.modulus(), s.clone());
        Ok(s)
    }

    pub fn truncated_form(&self, e: &[usize], i: usize) -> i64 {
        self.end.truncated_form(e, i)
    }

    pub fn g_module(&self, m: &MatrixRep<Rationals>) -> Result<MatrixRep<Rationals>> {
        self.end.g_module(&self.rational, m)
    }

    pub fn f_module(&self, m: &MatrixRep<Rationals>) -> Result<MatrixRep<Rationals>> {
        self.end.f_module(&self.rational, m)
    }

    /// `χ(Gr_e(GM))` for every `e`, and `X′_M`.
    pub fn profile_and_character(&self, m: &MatrixRep<Rationals>) -> Result<(Profile, LaurentPoly)> {
        let n = self.rational.n();
        let index = self.rational.fk_index(m)?;
        let gm = self.g_module(m)?;
        let profile = sub_dimension_vectors(gm.dims())
            .into_par_iter()
            .map(|e| Ok((e.clone(), chi_quiver_grassmannian(&gm, &e, &self.sampling)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut x = LaurentPoly::zero(n);
        for (e, chi) in &profile {
            if chi.is_zero() {
                continue;
            }
            let exps: Vec<i64> = (0..n).map(|i| index[i] - self.truncated_form(e, i)).collect();
            x.add_term(exps, chi.clone());
        }
        Ok((profile, x))
    }

    pub fn fk_character(&self, m: &MatrixRep<Rationals>) -> Result<LaurentPoly> {
        Ok(self.profile_and_character(m)?.1)
    }

    fn cached(&self, key: &ObjectKey) -> Result<(Profile, LaurentPoly)> {
        if let Some(c) = self.characters.lock().expect("lock").get(key) {
            return Ok(c.clone());
        }
        let c = self.profile_and_character(&self.rational.module_of(key))?;
        self.characters.lock().expect("lock").insert(key.clone(), c.clone());
        Ok(c)
    }

    pub fn character(&self, key: &ObjectKey) -> Result<LaurentPoly> {
        Ok(self.cached(key)?.1)
    }

    /// For all pairs of `B`-modules (catalog members supported on the
    /// non-projective vertices, and their pairwise sums) with equal dimension
    /// vectors: `⟨L, Y⟩_3 = ⟨M, Y⟩_3` for every catalog `Y`, and
    /// `⟨L, S_i⟩_3` agrees with the tabulated form on `dim L`.
    pub fn check_form_well_defined(&self) -> Result<FormCheck> {
        let pa = &self.end.pa;
        let r = self.rational.r();
        let catalog = IndecCatalog::build(pa, self.dim_cap)?;
        let b_mods: Vec<&MatrixRep<Rationals>> =
            catalog.modules().iter().filter(|m| m.dims()[r..].iter().all(|&d| d == 0)).collect();
        let mut family: Vec<MatrixRep<Rationals>> = b_mods.iter().map(|m| (*m).clone()).collect();
        for a in 0..b_mods.len() {
            for b in a..b_mods.len() {
                family.push(b_mods[a].direct_sum(b_mods[b]));
            }
        }
        let n = self.rational.n();
        let simples: Vec<MatrixRep<Rationals>> = (0..n).map(|i| MatrixRep::simple(self.end.algebra.clone(), Rationals, i)).collect();
        let mut check = FormCheck { modules: family.len(), ..FormCheck::default() };
        for l in &family {
            for (i, s) in simples.iter().enumerate() {
                check.comparisons += 1;
                let direct = truncated_euler(pa, l, s);
                if direct != self.truncated_form(l.dims(), i) {
                    check.failures.push(format!("<{:?}, S{}>_3 = {direct} differs from the tabulated form", l.dims(), i + 1));
                }
            }
        }
        for (a, l) in family.iter().enumerate() {
            for m in &family[a + 1..] {
                if l.dims() != m.dims() {
                    continue;
                }
                for (k, y) in catalog.modules().iter().enumerate() {
                    check.comparisons += 1;
                    let (u, v) = (truncated_euler(pa, l, y), truncated_euler(pa, m, y));
                    if u != v {
                        check.failures.push(format!("dims {:?}: <L, {}>_3 = {u} but <M, {}>_3 = {v}", l.dims(), catalog.name(k), catalog.name(k)));
                    }
                }
            }
        }
        Ok(check)
    }

    /// Bucket `P Ext¹(L, M)` by index and decomposition of the middle term,
    /// checking `ind Y = ind(L ⊕ M) − Σ_i ⟨d, S_i⟩_3 [T_i]` on every conflation.
    pub fn fk_strata(&self, l: &ObjectKey, m: &ObjectKey) -> Result<Vec<StratumReport>> {
        let d = Ext1Space::new(&self.rational.module_of(l), &self.rational.module_of(m)).dim();
        if d == 0 {
            return Ok(Vec::new());
        }
        let first = self.sampling.primes(d - 1)[0];
        let reps: Mutex<BTreeMap<StratumKey, Vec<u64>>> = Mutex::new(BTreeMap::new());
        let buckets = chi_of_buckets(d - 1, &self.sampling, |fp| {
            let setup = self.at_prime(fp)?;
            let (lp, mp) = (setup.module_of(l), setup.module_of(m));
            let ind_lm = setup.fk_index(&lp.direct_sum(&mp))?;
            let ext = Ext1Space::new(&lp, &mp);
            let mut counts: BTreeMap<StratumKey, u64> = BTreeMap::new();
            for pt in projective_points(fp, ext.dim()) {
                let (y, _, p) = ext.middle_term(&pt)?;
                let ind_y = setup.fk_index(&y)?;
                let dvec = setup.coker_dims(&y, &lp, &p);
                self.conflations.fetch_add(1, Ordering::Relaxed);
                let expected: Vec<i64> = (0..setup.n()).map(|i| ind_lm[i] - self.truncated_form(&dvec, i)).collect();
                if expected != ind_y {
                    self.index_violations.fetch_add(1, Ordering::Relaxed);
                }
                let key = StratumKey { class: ind_y, middle_term: setup.key_of(&y)? };
                if fp.modulus() == first {
                    reps.lock().expect("lock").entry(key.clone()).or_insert_with(|| pt.clone());
                }
                *counts.entry(key).or_default() += 1;
            }
            Ok(counts)
        })?;
        let mut reps = reps.into_inner().expect("lock");
        buckets
            .into_iter()
            .map(|b| {
                let (profile, character) = self.cached(&b.key.middle_term)?;
                Ok(StratumReport {
                    label: self.rational.render(&b.key.middle_term),
                    chi: b.chi,
                    counts: b.counts,
                    representative: reps.remove(&b.key).unwrap_or_default(),
                    chi_profile: profile,
                    character,
                    key: b.key,
                })
            })
            .collect()
    }
}

/// Check `χ(P Ext¹(L,M)) X′_L X′_M = ∫ X′_{mt} + ∫ X′_{mt}` exactly.
pub fn fk_verify(fam: &FrobeniusFamily, l: &ObjectKey, m: &ObjectKey) -> Result<VerificationReport> {
    let setup = fam.rational();
    let d = Ext1Space::new(&setup.module_of(l), &setup.module_of(m)).dim();
    let lhs = (&fam.character(l)? * &fam.character(m)?).scale(&BigInt::from(d));
    let strata_lm = fam.fk_strata(l, m)?;
    let strata_ml = fam.fk_strata(m, l)?;
    let mut rhs = LaurentPoly::zero(setup.n());
    for s in strata_lm.iter().chain(&strata_ml) {
        rhs = &rhs + &s.character.scale(&s.chi);
    }
    Ok(VerificationReport {
        formula: "frobenius",
        l: setup.render(l),
        m: setup.render(m),
        dim: d,
        pass: lhs == rhs,
        lhs,
        rhs,
        strata_lm,
        strata_ml,
        primes: if d == 0 { Vec::new() } else { fam.sampling().primes(d - 1) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::LaurentPoly as L;
    use crate::quiverrep::{linear_a, preprojective_a2};

    fn family() -> FrobeniusFamily {
        FrobeniusFamily::new(Arc::new(preprojective_a2()), &["S1", "P1", "P2"], 16, Sampling::default()).unwrap()
    }

    fn x(i: usize) -> L {
        L::variable(3, i)
    }

    #[test]
    fn setup_validation() {
        let fam = family();
        assert_eq!((fam.rational().n(), fam.rational().r()), (3, 1));
        let err = FrobeniusSetup::from_names(Arc::new(linear_a(2)), Rationals, &["S1", "P1", "S2"], 16).unwrap_err();
        assert!(matches!(err, Error::NotSelfInjective(_)));
        let err = FrobeniusSetup::from_names(Arc::new(preprojective_a2()), Rationals, &["S1", "P1"], 16).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        let err = FrobeniusSetup::from_names(Arc::new(preprojective_a2()), Rationals, &["S1", "S2", "P1", "P2"], 16).unwrap_err();
        assert!(matches!(err, Error::NotRigid(_)));
    }

    #[test]
    fn f_sends_t_to_projectives() {
        let fam = family();
        let pa = fam.end_algebra().path_algebra();
        for i in 0..3 {
            let ft = fam.f_module(fam.rational().t_module(i)).unwrap();
            assert!(indecomposables_isomorphic(&ft, &pa.projective(i)), "F T{}", i + 1);
        }
    }

    #[test]
    fn truncated_form_of_s1() {
        // 0 -> P1 -> P3 -> P2 -> P1 -> S1 -> 0 over End(T)
        let fam = family();
        let v: Vec<i64> = (0..3).map(|i| fam.truncated_form(&[1, 0, 0], i)).collect();
        assert_eq!(v, vec![0, -1, 1]);
        assert_eq!(fam.truncated_form(&[0, 0, 0], 2), 0);
        let c = fam.check_form_well_defined().unwrap();
        assert!(c.failures.is_empty(), "{:?}", c.failures);
    }

    #[test]
    fn characters() {
        let fam = family();
        let s = fam.rational();
        for i in 0..3 {
            assert_eq!(fam.character(&s.t_key(i)).unwrap(), x(i));
        }
        let s2 = s.key_by_name("S2").unwrap();
        let expected = &(&x(1) + &x(2)) * &L::monomial(vec![-1, 0, 0], 1);
        assert_eq!(fam.character(&s2).unwrap(), expected);
        assert_eq!(s.fk_index(&s.module_of(&s2)).unwrap(), vec![-1, 0, 1]);
        let both = s.key_by_name("S1 + S2").unwrap();
        assert_eq!(fam.character(&both).unwrap(), &x(1) + &x(2));
    }

    #[test]
    fn multiplication_formula() {
        let fam = family();
        let s = fam.rational();
        let (s1, s2) = (s.key_by_name("S1").unwrap(), s.key_by_name("S2").unwrap());
        let r = fk_verify(&fam, &s1, &s2).unwrap();
        assert!(r.pass, "{}", r.render(true));
        assert_eq!(r.strata_lm.iter().map(|s| s.label.as_str()).collect::<Vec<_>>(), vec!["P1"]);
        assert_eq!(r.strata_ml.iter().map(|s| s.label.as_str()).collect::<Vec<_>>(), vec!["P2"]);
        assert!(fam.conflations.load(Ordering::Relaxed) > 0);
        assert_eq!(fam.index_violations.load(Ordering::Relaxed), 0);
        let r = fk_verify(&fam, &s1, &s.key_by_name("P1").unwrap()).unwrap();
        assert!(r.pass && r.dim == 0);
    }
}
