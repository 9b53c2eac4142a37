use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Field, PrimeField, Rationals};

use super::quiver::Algebra;

/// A finite-dimensional representation: one vector space `k^{d_i}` per vertex
/// and one matrix of shape `d_target x d_source` per arrow.
#[derive(Clone, Debug)]
pub struct MatrixRep<F: Field> {
    algebra: Arc<Algebra>,
    field: F,
    dims: Vec<usize>,
    mats: Vec<ExactMatrix<F>>,
}

impl<F: Field> PartialEq for MatrixRep<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.mats == other.mats
    }
}

impl<F: Field> MatrixRep<F> {
    /// Checked constructor: shapes must match `dims` and every relation must
    /// evaluate to zero.
    pub fn new(algebra: Arc<Algebra>, field: F, dims: Vec<usize>, mats: Vec<ExactMatrix<F>>) -> Result<Self> {
        let rep = Self::new_unchecked(algebra, field, dims, mats)?;
        rep.check_relations()?;
        Ok(rep)
    }

    /// Shape-checked only; relations are not evaluated.
    pub fn new_unchecked(algebra: Arc<Algebra>, field: F, dims: Vec<usize>, mats: Vec<ExactMatrix<F>>) -> Result<Self> {
        let q = algebra.quiver();
        if dims.len() != q.n_vertices() {
            return Err(Error::ShapeMismatch(format!("{} dimensions for {} vertices", dims.len(), q.n_vertices())));
        }
        if mats.len() != q.arrows().len() {
            return Err(Error::ShapeMismatch(format!("{} matrices for {} arrows", mats.len(), q.arrows().len())));
        }
        for (a, m) in q.arrows().iter().zip(&mats) {
            if m.shape() != (dims[a.target], dims[a.source]) {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(MatrixRep { algebra, field, dims, mats })
    }

    pub fn zero(algebra: Arc<Algebra>, field: F) -> Self {
        let n = algebra.n();
        Self::with_zero_maps(algebra, field, vec![0; n])
    }

    /// All arrows act by zero; this is a module for every admissible algebra.
    pub fn with_zero_maps(algebra: Arc<Algebra>, field: F, dims: Vec<usize>) -> Self {
        let mats = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| ExactMatrix::zeros(field.clone(), dims[a.target], dims[a.source]))
            .collect();
        MatrixRep { algebra, field, dims, mats }
    }

    pub fn simple(algebra: Arc<Algebra>, field: F, vertex: usize) -> Self {
        let mut dims = vec![0; algebra.n()];
        dims[vertex] = 1;
        Self::with_zero_maps(algebra, field, dims)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
    pub fn mats(&self) -> &[ExactMatrix<F>] {
        &self.mats
    }
    pub fn arrow_matrix(&self, a: usize) -> &ExactMatrix<F> {
        &self.mats[a]
    }

    /// Matrix of a path `a1*a2*...`, i.e. `M_{ak} ... M_{a1}`.
    pub fn path_matrix(&self, path: &[usize]) -> ExactMatrix<F> {
        let q = self.algebra.quiver();
        let start = q.arrow(path[0]).source;
        let mut acc = ExactMatrix::identity(self.field.clone(), self.dims[start]);
        for &a in path {
            acc = self.mats[a].mul(&acc);
        }
        acc
    }

    pub fn check_relations(&self) -> Result<()> {
        let q = self.algebra.quiver();
        for (k, rel) in self.algebra.relations().relations.iter().enumerate() {
            let (s, t) = q.path_ends(&rel.terms[0].1).expect("validated relation");
            let mut acc = ExactMatrix::zeros(self.field.clone(), self.dims[t], self.dims[s]);
            for (c, path) in &rel.terms {
                acc = acc.add(&self.path_matrix(path).scale(&self.field.from_i64(*c)));
            }
            if !acc.is_zero() {
                return Err(Error::RelationViolation(format!("relation {} does not vanish", k + 1)));
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.direct_sum(b)).collect();
        MatrixRep { algebra: self.algebra.clone(), field: self.field.clone(), dims, mats }
    }

    pub fn direct_sum_all<'a>(algebra: Arc<Algebra>, field: F, parts: impl IntoIterator<Item = &'a Self>) -> Self
    where
        F: 'a,
    {
        parts.into_iter().fold(Self::zero(algebra, field), |acc, m| acc.direct_sum(m))
    }

    /// Submodule spanned by the columns of `bases[v]` at each vertex. The
    /// subspaces must be stable under every arrow (checked).
    pub fn restrict(&self, bases: &[ExactMatrix<F>]) -> Result<Self> {
        let q = self.algebra.quiver();
        let mut mats = Vec::with_capacity(self.mats.len());
        for (i, a) in q.arrows().iter().enumerate() {
            let image = self.mats[i].mul(&bases[a.source]);
            let coords = bases[a.target]
                .solve_matrix(&image)
                .ok_or_else(|| Error::InvalidInput(format!("subspace not stable under arrow {}", a.name)))?;
            mats.push(coords);
        }
        let dims = bases.iter().map(|b| b.cols()).collect();
        Ok(MatrixRep { algebra: self.algebra.clone(), field: self.field.clone(), dims, mats })
    }

    /// Transport to another field entrywise.
    pub fn map_field<G: Field>(&self, target: G, conv: impl Fn(&F::Elem) -> Result<G::Elem> + Copy) -> Result<MatrixRep<G>> {
        let mats = self.mats.iter().map(|m| m.map_field(target.clone(), conv)).collect::<Result<Vec<_>>>()?;
        Ok(MatrixRep { algebra: self.algebra.clone(), field: target, dims: self.dims.clone(), mats })
    }

    pub fn with_algebra(&self, algebra: Arc<Algebra>) -> Self {
        MatrixRep { algebra, ..self.clone() }
    }
}

impl MatrixRep<Rationals> {
    /// Reduction modulo `p`; fails if a denominator is divisible by `p`.
    pub fn reduce_mod(&self, fp: PrimeField) -> Result<MatrixRep<PrimeField>> {
        self.map_field(fp, |q| fp.from_rational(q))
    }
}

/// A module homomorphism, stored as one matrix per vertex
/// (`target_dims[v] x source_dims[v]`).
#[derive(Clone, Debug, PartialEq)]
pub struct ModMap<F: Field> {
    pub blocks: Vec<ExactMatrix<F>>,
}

impl<F: Field> ModMap<F> {
    pub fn zero(field: &F, source: &[usize], target: &[usize]) -> Self {
        ModMap {
            blocks: source.iter().zip(target).map(|(&s, &t)| ExactMatrix::zeros(field.clone(), t, s)).collect(),
        }
    }

    pub fn identity(field: &F, dims: &[usize]) -> Self {
        ModMap { blocks: dims.iter().map(|&d| ExactMatrix::identity(field.clone(), d)).collect() }
    }

    pub fn source_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.cols()).collect()
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rows()).collect()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Self) -> Self {
        ModMap { blocks: self.blocks.iter().zip(&first.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        ModMap { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        ModMap { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.blocks.iter().all(|b| b.is_invertible())
    }

    /// Naturality: `f_t X_a = Y_a f_s` for every arrow.
    pub fn is_morphism(&self, source: &MatrixRep<F>, target: &MatrixRep<F>) -> bool {
        if self.source_dims() != source.dims() || self.target_dims() != target.dims() {
            return false;
        }
        source.algebra().quiver().arrows().iter().enumerate().all(|(i, a)| {
            self.blocks[a.target].mul(source.arrow_matrix(i)) == target.arrow_matrix(i).mul(&self.blocks[a.source])
        })
    }

    /// Linear combination `Σ c_k f_k` of maps with equal shapes.
    pub fn combination(field: &F, coeffs: &[F::Elem], maps: &[Self], source: &[usize], target: &[usize]) -> Self {
        coeffs
            .iter()
            .zip(maps)
            .filter(|(c, _)| !field.is_zero(c))
            .fold(Self::zero(field, source, target), |acc, (c, m)| acc.add(&m.scale(c)))
    }

    /// Block-diagonal sum of two maps.
    pub fn direct_sum(&self, other: &Self) -> Self {
        ModMap { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.direct_sum(b)).collect() }
    }

    /// Flatten all blocks into one coordinate vector (vertex-major, row-major).
    pub fn flatten(&self) -> Vec<F::Elem> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiverrep::quiver::{linear_a, preprojective_a2};

    #[test]
    fn shape_errors() {
        let alg = Arc::new(linear_a(2));
        let bad = MatrixRep::new(alg, Rationals, vec![1, 1], vec![ExactMatrix::zeros(Rationals, 2, 1)]);
        assert!(matches!(bad, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn relation_violation_detected() {
        let alg = Arc::new(preprojective_a2());
        let f = Rationals;
        let one = ExactMatrix::identity(f, 1);
        let bad = MatrixRep::new(alg.clone(), f, vec![1, 1], vec![one.clone(), one.clone()]);
        assert!(matches!(bad, Err(Error::RelationViolation(_))));
        let ok = MatrixRep::new(alg, f, vec![1, 1], vec![one, ExactMatrix::zeros(f, 1, 1)]);
        assert!(ok.is_ok());
    }
}
