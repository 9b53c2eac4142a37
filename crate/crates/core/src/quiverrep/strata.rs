//! Coordinate strata of linear maps and cokernels computed on them.
//!
//! For a coordinate subspace `N` of the target, `E_N` is the set of maps `f`
//! with `im f ⊕ N = target`. Membership is decided by minors: writing `A₁`
//! for the rows of `A` indexed by `N` and `A₂` for the remaining `r` rows,
//! `f ∈ E_N` iff some `r x r` minor of `A₂` is nonzero and every
//! `(r+1) x (r+1)` minor on rows `{i₀} ∪ rows(A₂)`, `i₀ ∈ N`, vanishes.
//! On such a stratum the projection onto `N` along `im f` is `(1  −CD⁻¹)`.

use itertools::Itertools;

use crate::exactalg::{ExactMatrix, Field};

use super::rep::{MatrixRep, ModMap};

fn complement(m: usize, n_rows: &[usize]) -> Vec<usize> {
    (0..m).filter(|i| !n_rows.contains(i)).collect()
}

/// First column subset `J` (lexicographic) with `det A[rows, J] ≠ 0`.
fn nonzero_minor<F: Field>(a: &ExactMatrix<F>, rows: &[usize]) -> Option<Vec<usize>> {
    let f = a.field();
    (0..a.cols())
        .combinations(rows.len())
        .find(|cols| !f.is_zero(&a.submatrix(rows, cols).determinant().expect("square")))
}

/// Decide `im f ⊕ N = target` for the coordinate subspace spanned by the
/// standard basis vectors in `n_rows`, using only determinants.
pub fn stratum_e_n<F: Field>(a: &ExactMatrix<F>, n_rows: &[usize]) -> bool {
    let f = a.field();
    let rest = complement(a.rows(), n_rows);
    let r = rest.len();
    // condition a): some r x r minor of A₂ is nonzero
    if nonzero_minor(a, &rest).is_none() {
        return false;
    }
    // condition b′): minors on {i₀} ∪ rows(A₂) of size r+1 vanish
    for &i0 in n_rows {
        let mut rows = vec![i0];
        rows.extend_from_slice(&rest);
        for cols in (0..a.cols()).combinations(r + 1) {
            if !f.is_zero(&a.submatrix(&rows, &cols).determinant().expect("square")) {
                return false;
            }
        }
    }
    true
}

/// Direct test of `im f ⊕ N = target` by ranks.
pub fn stratum_by_rank<F: Field>(a: &ExactMatrix<F>, n_rows: &[usize]) -> bool {
    let mut nb = ExactMatrix::zeros(a.field().clone(), a.rows(), n_rows.len());
    for (j, &i) in n_rows.iter().enumerate() {
        nb.set(i, j, a.field().one());
    }
    a.rank() + n_rows.len() == a.rows() && a.hstack(&nb).rank() == a.rows()
}

/// The lexicographically first coordinate subspace `N` with `f ∈ E_N`.
pub fn first_stratum<F: Field>(a: &ExactMatrix<F>) -> Vec<usize> {
    let p = a.rows() - a.rank();
    (0..a.rows())
        .combinations(p)
        .find(|n_rows| stratum_e_n(a, n_rows))
        .expect("some coordinate subspace complements the image")
}

/// Projection `p_f: target -> N` along `im f`, as the matrix `(1  −CD⁻¹)`
/// with columns permuted back to the original coordinates.
pub fn stratum_projection<F: Field>(a: &ExactMatrix<F>, n_rows: &[usize]) -> ExactMatrix<F> {
    let f = a.field();
    let rest = complement(a.rows(), n_rows);
    let j = nonzero_minor(a, &rest).expect("map lies in the stratum");
    let c = a.submatrix(n_rows, &j);
    let d = a.submatrix(&rest, &j);
    let ncd = c.mul(&d.inverse().expect("nonzero minor")).neg();
    let mut p = ExactMatrix::zeros(f.clone(), n_rows.len(), a.rows());
    for (k, &i) in n_rows.iter().enumerate() {
        p.set(k, i, f.one());
        for (l, &col) in rest.iter().enumerate() {
            p.set(k, col, ncd.get(k, l).clone());
        }
    }
    p
}

/// Cokernel of `f: _ -> target` computed stratum by stratum: at each vertex
/// `N` is the first coordinate complement of `im f`, the projection is the
/// explicit `(1  −CD⁻¹)` matrix, and arrows act by `p_f ∘ M_a ∘ i_N`.
/// Returns the cokernel, the projection, and the chosen `N` per vertex.
pub fn cokernel_structure<F: Field>(target: &MatrixRep<F>, f: &ModMap<F>) -> (MatrixRep<F>, ModMap<F>, Vec<Vec<usize>>) {
    let field = target.field();
    let strata: Vec<Vec<usize>> = f.blocks.iter().map(first_stratum).collect();
    let proj: Vec<ExactMatrix<F>> = f.blocks.iter().zip(&strata).map(|(b, n)| stratum_projection(b, n)).collect();
    let incl: Vec<ExactMatrix<F>> = strata
        .iter()
        .enumerate()
        .map(|(v, n)| {
            let mut m = ExactMatrix::zeros(field.clone(), target.dim(v), n.len());
            for (k, &i) in n.iter().enumerate() {
                m.set(i, k, field.one());
            }
            m
        })
        .collect();
    let q = target.algebra().quiver();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| proj[a.target].mul(target.arrow_matrix(i)).mul(&incl[a.source]))
        .collect();
    let dims = strata.iter().map(|n| n.len()).collect();
    let coker = MatrixRep::new_unchecked(target.algebra().clone(), field.clone(), dims, mats).expect("shapes");
    (coker, ModMap { blocks: proj }, strata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};
    use crate::quiverrep::hom::hom_space;
    use crate::quiverrep::pathalg::PathAlgebra;
    use crate::quiverrep::quiver::linear_a;
    use std::sync::Arc;

    #[test]
    fn strata_examples() {
        let q = Rationals;
        let id = ExactMatrix::identity(q, 2);
        assert!(stratum_e_n(&id, &[]));
        let zero = ExactMatrix::zeros(q, 2, 2);
        assert!(stratum_e_n(&zero, &[0, 1]));
        let col = ExactMatrix::from_i64(q, &[vec![1], vec![0]]);
        assert!(!stratum_e_n(&col, &[0]));
        assert!(stratum_e_n(&col, &[1]));
    }

    #[test]
    fn determinant_test_matches_ranks_over_f5() {
        let f5 = PrimeField::new(5).unwrap();
        // every 2x2 matrix over F_3-sized entries {0,1,4}, every N
        let vals = [0i64, 1, 4];
        for entries in (0..4).map(|_| vals.iter()).multi_cartesian_product() {
            let a = ExactMatrix::from_i64(f5, &[vec![*entries[0], *entries[1]], vec![*entries[2], *entries[3]]]);
            for p in 0..=2 {
                for n in (0..2).combinations(p) {
                    assert_eq!(stratum_e_n(&a, &n), stratum_by_rank(&a, &n));
                }
            }
        }
    }

    #[test]
    fn projection_kills_image() {
        let q = Rationals;
        let a = ExactMatrix::from_i64(q, &[vec![1, 2], vec![3, 4], vec![4, 6]]);
        let n = first_stratum(&a);
        let p = stratum_projection(&a, &n);
        assert!(p.mul(&a).is_zero());
    }

    #[test]
    fn cokernel_of_socle_inclusion_is_top() {
        let alg = Arc::new(linear_a(2));
        let pa = PathAlgebra::new(alg.clone(), Rationals).unwrap();
        let s2 = MatrixRep::simple(alg, Rationals, 1);
        let p1 = pa.projective(0);
        let f = hom_space(&s2, &p1).pop().unwrap();
        let (c, p, _) = cokernel_structure(&p1, &f);
        assert_eq!(c.dims(), &[1, 0]);
        assert!(p.is_morphism(&p1, &c));
        let zero = ModMap::zero(&Rationals, s2.dims(), p1.dims());
        let (c0, p0, _) = cokernel_structure(&p1, &zero);
        assert_eq!(c0, p1);
        assert!(p0.blocks.iter().all(|b| *b == ExactMatrix::identity(Rationals, b.rows())));
    }
}
