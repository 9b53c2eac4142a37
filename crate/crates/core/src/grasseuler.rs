//! Euler characteristics of quiver Grassmannians and of finite families,
//! from exact point counts over several prime fields.
//!
//! Submodules are enumerated vertex by vertex. Once some vertices carry a
//! chosen subspace, an arrow from a chosen vertex forces a lower bound
//! `W ⊆ U_v` and an arrow into a chosen vertex forces an upper bound
//! `U_v ⊆ V`, so the candidates at `v` are the subspaces between `W` and `V`,
//! i.e. a Grassmannian of `V/W`. Every arrow is checked exactly once, when
//! its second endpoint is chosen.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::Range;

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{interpolate_counts, sampling_primes, CountingPolynomial, ExactMatrix, Field, PrimeField, Rationals};
use crate::quiverrep::hom::complement_coordinates;
use crate::quiverrep::MatrixRep;

/// How many primes to sample beyond the minimum `degree_bound + 3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sampling {
    pub extra_primes: usize,
}

impl Sampling {
    pub fn primes(&self, degree_bound: usize) -> Vec<u64> {
        sampling_primes(degree_bound + 3 + self.extra_primes)
    }
}

/// A submodule, one subspace per vertex given by the rows of a matrix in
/// reduced echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmodulePoint {
    pub subspaces: Vec<ExactMatrix<PrimeField>>,
}

impl SubmodulePoint {
    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(|s| s.rows()).collect()
    }
}

/// All `k`-dimensional subspaces of `F^n`, as `k x n` reduced echelon
/// matrices, ordered by pivot pattern then by free entries.
pub fn grassmannian_points<F: Field>(field: &F, elements: &[F::Elem], k: usize, n: usize) -> Vec<ExactMatrix<F>> {
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let choices = if free.is_empty() {
            vec![Vec::new()]
        } else {
            free.iter().map(|_| elements.iter().cloned()).multi_cartesian_product().collect()
        };
        for vals in choices {
            let mut m = ExactMatrix::zeros(field.clone(), k, n);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, field.one());
            }
            for (&(i, c), v) in free.iter().zip(vals) {
                m.set(i, c, v);
            }
            out.push(m);
        }
    }
    out
}

struct Walker<'a> {
    m: &'a MatrixRep<PrimeField>,
    e: &'a [usize],
    elements: Vec<u64>,
    /// Chosen subspaces as column bases.
    chosen: Vec<Option<ExactMatrix<PrimeField>>>,
}

impl Walker<'_> {
    fn field(&self) -> PrimeField {
        *self.m.field()
    }

    /// Lower bound `W` and upper bound `V` (column bases) for vertex `v`.
    fn bounds(&self, v: usize) -> (ExactMatrix<PrimeField>, ExactMatrix<PrimeField>) {
        let f = self.field();
        let d = self.m.dim(v);
        let q = self.m.algebra().quiver();
        let mut lower = ExactMatrix::zeros(f, d, 0);
        for a in q.arrows_into(v) {
            if let Some(u) = &self.chosen[q.arrow(a).source] {
                lower = lower.hstack(&self.m.arrow_matrix(a).mul(u));
            }
        }
        // U_v ⊆ M_a^{-1}(U_t): rows of a left annihilator of U_t pulled back
        let mut constraints = ExactMatrix::zeros(f, 0, d);
        for a in q.arrows_from(v) {
            if let Some(u) = &self.chosen[q.arrow(a).target] {
                let ann = u.transpose().kernel_matrix().transpose();
                constraints = constraints.vstack(&ann.mul(self.m.arrow_matrix(a)));
            }
        }
        (lower.column_space(), constraints.kernel_matrix())
    }

    fn walk(&mut self, v: usize, visit: &mut dyn FnMut(&[Option<ExactMatrix<PrimeField>>])) {
        let n = self.m.dims().len();
        if v == n {
            visit(&self.chosen);
            return;
        }
        let f = self.field();
        let (lower, upper) = self.bounds(v);
        let w = lower.cols();
        if w > self.e[v] || upper.cols() < self.e[v] {
            return;
        }
        // lower bound in coordinates of the upper bound
        let Some(w_coords) = upper.solve_matrix(&lower) else {
            return;
        };
        let comp = complement_coordinates(&w_coords);
        let q = self.m.algebra().quiver();
        let loops: Vec<usize> = q.arrows_from(v).filter(|&a| q.arrow(a).target == v).collect();
        for s in grassmannian_points(&f, &self.elements, self.e[v] - w, comp.len()) {
            // lift the quotient subspace through the complement coordinates
            let mut lift = ExactMatrix::zeros(f, upper.cols(), s.rows());
            for i in 0..s.rows() {
                for (j, &c) in comp.iter().enumerate() {
                    lift.set(c, i, *s.get(i, j));
                }
            }
            let basis = upper.mul(&w_coords.hstack(&lift));
            if loops.iter().any(|&a| basis.hstack(&self.m.arrow_matrix(a).mul(&basis)).rank() > basis.cols()) {
                continue;
            }
            self.chosen[v] = Some(basis);
            self.walk(v + 1, visit);
        }
        self.chosen[v] = None;
    }
}

/// Visit every `F_p`-point of `Gr_e(m)` once.
pub fn for_each_submodule(
    m: &MatrixRep<PrimeField>,
    e: &[usize],
    visit: &mut dyn FnMut(&[Option<ExactMatrix<PrimeField>>]),
) {
    if e.len() != m.dims().len() || e.iter().zip(m.dims()).any(|(a, b)| a > b) {
        return;
    }
    let elements: Vec<u64> = m.field().elements().collect();
    let mut w = Walker { m, e, elements, chosen: vec![None; e.len()] };
    w.walk(0, visit);
}

/// Rows of the reduced echelon form of the column span of `basis`.
pub fn echelon_rows(basis: &ExactMatrix<PrimeField>) -> ExactMatrix<PrimeField> {
    let r = basis.transpose().rref();
    let rows: Vec<usize> = (0..r.pivots.len()).collect();
    let cols: Vec<usize> = (0..basis.rows()).collect();
    r.matrix.submatrix(&rows, &cols)
}

/// Points of `Gr_e(m)` in enumeration order, restricted to the index range
/// `shard` when given.
pub fn enumerate_submodules(m: &MatrixRep<PrimeField>, e: &[usize], shard: Option<Range<usize>>) -> Vec<SubmodulePoint> {
    let mut out = Vec::new();
    let mut idx = 0usize;
    for_each_submodule(m, e, &mut |chosen| {
        if shard.as_ref().is_none_or(|r| r.contains(&idx)) {
            out.push(SubmodulePoint { subspaces: chosen.iter().map(|b| echelon_rows(b.as_ref().expect("complete"))).collect() });
        }
        idx += 1;
    });
    out
}

pub fn count_submodules(m: &MatrixRep<PrimeField>, e: &[usize]) -> u64 {
    let mut n = 0u64;
    for_each_submodule(m, e, &mut |_| n += 1);
    n
}

/// Dimension of the ambient product of Grassmannians, `Σ e_i (d_i − e_i)`.
pub fn grassmannian_degree_bound(dims: &[usize], e: &[usize]) -> usize {
    dims.iter().zip(e).map(|(&d, &k)| k * d.saturating_sub(k)).sum()
}

/// Fit and verify a counting polynomial from per-prime counts.
pub fn chi_from_counts(
    degree_bound: usize,
    sampling: &Sampling,
    count: impl Fn(PrimeField) -> Result<u64> + Sync,
) -> Result<CountingPolynomial> {
    let primes = sampling.primes(degree_bound);
    let samples: Vec<(u64, BigInt)> = primes
        .par_iter()
        .map(|&p| Ok((p, BigInt::from(count(PrimeField::new(p)?)?))))
        .collect::<Result<Vec<_>>>()?;
    interpolate_counts(&samples, degree_bound)
}

/// `χ(Gr_e(m))` for a module with integral matrices, by reduction modulo
/// each sampling prime.
pub fn chi_quiver_grassmannian(m: &MatrixRep<Rationals>, e: &[usize], sampling: &Sampling) -> Result<BigInt> {
    chi_with(m.dims(), e, sampling, |fp| m.reduce_mod(fp))
}

/// `χ(Gr_e)` of a module built separately over each prime field.
pub fn chi_with(
    dims: &[usize],
    e: &[usize],
    sampling: &Sampling,
    build: impl Fn(PrimeField) -> Result<MatrixRep<PrimeField>> + Sync,
) -> Result<BigInt> {
    if e.len() != dims.len() || e.iter().zip(dims).any(|(a, b)| a > b) {
        return Ok(BigInt::from(0));
    }
    let bound = grassmannian_degree_bound(dims, e);
    let poly = chi_from_counts(bound, sampling, |fp| Ok(count_submodules(&build(fp)?, e)))?;
    Ok(poly.chi())
}

/// Every dimension vector `e ≤ dims`, in lexicographic order.
pub fn sub_dimension_vectors(dims: &[usize]) -> Vec<Vec<usize>> {
    dims.iter().map(|&d| 0..=d).multi_cartesian_product().collect()
}

/// One bucket of a family partitioned by an invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketedCount<K> {
    pub key: K,
    pub counts: Vec<(u64, BigInt)>,
    pub polynomial: CountingPolynomial,
    pub chi: BigInt,
}

/// Per-key Euler characteristics of a family whose `F_p`-points have been
/// bucketed by a field-independent key. `count` returns the bucket sizes
/// over one prime field.
pub fn chi_of_buckets<K>(
    degree_bound: usize,
    sampling: &Sampling,
    count: impl Fn(PrimeField) -> Result<BTreeMap<K, u64>> + Sync,
) -> Result<Vec<BucketedCount<K>>>
where
    K: Ord + Clone + Debug + Send + Sync,
{
    let primes = sampling.primes(degree_bound);
    let per_prime: Vec<(u64, BTreeMap<K, u64>)> =
        primes.par_iter().map(|&p| Ok((p, count(PrimeField::new(p)?)?))).collect::<Result<Vec<_>>>()?;
    let keys: Vec<K> = per_prime[0].1.keys().cloned().collect();
    for (p, buckets) in &per_prime[1..] {
        if buckets.keys().ne(keys.iter()) {
            return Err(Error::KeyMismatch {
                prime: *p,
                detail: format!("keys {:?} differ from {:?} seen at p = {}", buckets.keys().collect::<Vec<_>>(), keys, per_prime[0].0),
            });
        }
    }
    keys.into_iter()
        .map(|key| {
            let counts: Vec<(u64, BigInt)> = per_prime.iter().map(|(p, b)| (*p, BigInt::from(b[&key]))).collect();
            let polynomial = interpolate_counts(&counts, degree_bound)?;
            let chi = polynomial.chi();
            Ok(BucketedCount { key, counts, polynomial, chi })
        })
        .collect()
}

/// Points of `P^{d-1}(F_p)`, first nonzero coordinate normalized to one.
pub fn projective_points(fp: PrimeField, d: usize) -> Vec<Vec<u64>> {
    let elements: Vec<u64> = fp.elements().collect();
    let mut out = Vec::new();
    for lead in 0..d {
        let tail = d - lead - 1;
        let rests: Vec<Vec<u64>> =
            if tail == 0 { vec![Vec::new()] } else { (0..tail).map(|_| elements.iter().copied()).multi_cartesian_product().collect() };
        for rest in rests {
            let mut v = vec![0u64; lead];
            v.push(1);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverrep::{linear_a, PathAlgebra};
    use std::sync::Arc;

    #[test]
    fn zero_dimension_vector_has_one_point() {
        let alg = Arc::new(linear_a(2));
        let f5 = PrimeField::new(5).unwrap();
        let pa = PathAlgebra::new(alg, f5).unwrap();
        assert_eq!(count_submodules(&pa.projective(0), &[0, 0]), 1);
    }

    #[test]
    fn semisimple_lines() {
        let alg = Arc::new(linear_a(2));
        let f5 = PrimeField::new(5).unwrap();
        let s1 = MatrixRep::simple(alg, f5, 0);
        let m = s1.direct_sum(&s1);
        assert_eq!(enumerate_submodules(&m, &[1, 0], None).len(), 6);
        assert_eq!(enumerate_submodules(&m, &[1, 0], Some(2..4)).len(), 2);
        let mq = MatrixRep::simple(Arc::new(linear_a(2)), Rationals, 0);
        let mq = mq.direct_sum(&mq);
        assert_eq!(chi_quiver_grassmannian(&mq, &[1, 0], &Sampling::default()).unwrap(), BigInt::from(2));
    }

    #[test]
    fn projective_of_a2() {
        let alg = Arc::new(linear_a(2));
        let pa = PathAlgebra::new(alg, Rationals).unwrap();
        let p1 = pa.projective(0);
        let s = Sampling::default();
        for e in [[0, 0], [0, 1], [1, 1]] {
            assert_eq!(chi_quiver_grassmannian(&p1, &e, &s).unwrap(), BigInt::from(1));
        }
        assert_eq!(chi_quiver_grassmannian(&p1, &[1, 0], &s).unwrap(), BigInt::from(0));
        let f5 = PrimeField::new(5).unwrap();
        let pts = enumerate_submodules(&p1.reduce_mod(f5).unwrap(), &[0, 1], None);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].dims(), vec![0, 1]);
    }

    #[test]
    fn bucket_examples() {
        let s = Sampling::default();
        let whole = chi_of_buckets(1, &s, |fp| Ok(BTreeMap::from([((), projective_points(fp, 2).len() as u64)]))).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].chi, BigInt::from(2));
        let split = chi_of_buckets(1, &s, |fp| {
            let mut b = BTreeMap::new();
            for pt in projective_points(fp, 2) {
                *b.entry(pt == vec![0, 1]).or_insert(0u64) += 1;
            }
            Ok(b)
        })
        .unwrap();
        assert_eq!(split.iter().map(|b| b.chi.clone()).collect::<Vec<_>>(), vec![BigInt::from(1), BigInt::from(1)]);
        let empty = chi_of_buckets::<u8>(0, &s, |_| Ok(BTreeMap::new())).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn key_mismatch_is_reported() {
        let r = chi_of_buckets(0, &Sampling::default(), |fp| Ok(BTreeMap::from([(fp.modulus() == 5, 1u64)])));
        assert!(matches!(r, Err(Error::KeyMismatch { .. })));
    }
}
