//! Indecomposable modules of a representation-finite algebra.
//!
//! The catalog is grown from simples, projectives and injectives by closing
//! under `τ`, `τ⁻¹`, radicals, socle quotients and middle terms of basis
//! extensions, splitting every new module into indecomposables with Fitting
//! decompositions. A dimension cap turns runaway growth into an error.

use std::cmp::Reverse;
use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Field, Rationals};

use super::ext::Ext1Space;
use super::hom::{hom_dim, hom_space, image_bases, kernel_bases, socle_dims, top_dims};
use super::pathalg::PathAlgebra;
use super::rep::{MatrixRep, ModMap};
use super::translate::{radical, socle_quotient, tau, tau_inverse};

pub const DEFAULT_DIM_CAP: usize = 16;
const MAX_INDECOMPOSABLES: usize = 256;

fn block_diagonal<F: Field>(m: &MatrixRep<F>, f: &ModMap<F>) -> ExactMatrix<F> {
    f.blocks
        .iter()
        .fold(ExactMatrix::zeros(m.field().clone(), 0, 0), |acc, b| acc.direct_sum(b))
}

fn power<F: Field>(f: &ModMap<F>, k: usize, dims: &[usize], field: &F) -> ModMap<F> {
    (0..k).fold(ModMap::identity(field, dims), |acc, _| acc.compose(f))
}

fn is_nilpotent<F: Field>(m: &MatrixRep<F>, f: &ModMap<F>) -> bool {
    power(f, m.total_dim(), m.dims(), m.field()).is_zero()
}

/// `M = ker φ^N ⊕ im φ^N` for an endomorphism `φ` that is neither nilpotent
/// nor invertible.
fn fitting_split<F: Field>(m: &MatrixRep<F>, phi: &ModMap<F>) -> (MatrixRep<F>, MatrixRep<F>) {
    let psi = power(phi, m.total_dim(), m.dims(), m.field());
    let k = m.restrict(&kernel_bases(&psi)).expect("kernel is a submodule");
    let i = m.restrict(&image_bases(&psi)).expect("image is a submodule");
    (k, i)
}

fn splitting_endomorphism<F: Field>(m: &MatrixRep<F>, basis: &[ModMap<F>]) -> Option<ModMap<F>> {
    let field = m.field();
    let mut candidates: Vec<ModMap<F>> = basis.to_vec();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i..] {
            candidates.push(a.add(b));
            candidates.push(a.compose(b));
        }
    }
    let id = ModMap::identity(field, m.dims());
    for c in candidates {
        let mut shifted = vec![c.clone()];
        for lambda in field.eigenvalues(&block_diagonal(m, &c)) {
            shifted.push(c.add(&id.scale(&field.neg(&lambda))));
        }
        for phi in shifted {
            if !phi.is_iso() && !is_nilpotent(m, &phi) {
                return Some(phi);
            }
        }
    }
    None
}

/// Certify that `End(M)` is local: `End(M) = k·1 + N` with `N` a nilpotent ideal.
fn has_local_endomorphisms<F: Field>(m: &MatrixRep<F>, basis: &[ModMap<F>]) -> bool {
    let field = m.field();
    let id = ModMap::identity(field, m.dims());
    let mut radical = Vec::new();
    for b in basis {
        let ev = field.eigenvalues(&block_diagonal(m, b));
        if ev.len() != 1 {
            return false;
        }
        let n = b.add(&id.scale(&field.neg(&ev[0])));
        if !is_nilpotent(m, &n) {
            return false;
        }
        radical.push(n.flatten());
    }
    let len = radical.first().map_or(0, |v| v.len());
    let span = ExactMatrix::from_columns(field.clone(), len, &radical);
    let rank = span.rank();
    let in_span = |v: Vec<F::Elem>| span.hstack(&ExactMatrix::from_columns(field.clone(), len, &[v])).rank() == rank;
    let rad_maps: Vec<ModMap<F>> = basis
        .iter()
        .map(|b| {
            let ev = field.eigenvalues(&block_diagonal(m, b));
            b.add(&id.scale(&field.neg(&ev[0])))
        })
        .collect();
    for a in &rad_maps {
        for b in &rad_maps {
            if !in_span(a.compose(b).flatten()) {
                return false;
            }
        }
    }
    // the span is an ideal; check that its powers reach zero
    let mut layer = rad_maps.clone();
    for _ in 0..=m.total_dim() {
        if layer.iter().all(|x| x.is_zero()) {
            return true;
        }
        let products: Vec<Vec<F::Elem>> =
            layer.iter().flat_map(|a| rad_maps.iter().map(move |b| a.compose(b).flatten())).collect();
        let basis = ExactMatrix::from_columns(field.clone(), len, &products).column_space();
        layer = basis
            .columns()
            .iter()
            .map(|v| super::hom::map_from_flat(field, v, m.dims(), m.dims()))
            .collect();
    }
    false
}

/// Split a module into indecomposable summands.
pub fn split_indecomposables<F: Field>(m: &MatrixRep<F>) -> Result<Vec<MatrixRep<F>>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let basis = hom_space(m, m);
    if let Some(phi) = splitting_endomorphism(m, &basis) {
        let (a, b) = fitting_split(m, &phi);
        let mut out = split_indecomposables(&a)?;
        out.extend(split_indecomposables(&b)?);
        return Ok(out);
    }
    if has_local_endomorphisms(m, &basis) {
        Ok(vec![m.clone()])
    } else {
        Err(Error::DecompositionFailure(format!(
            "could not split a module of dimension vector {:?} over this field",
            m.dims()
        )))
    }
}

/// Isomorphism test for indecomposable modules: some product of Hom basis
/// elements is invertible.
pub fn indecomposables_isomorphic<F: Field>(x: &MatrixRep<F>, y: &MatrixRep<F>) -> bool {
    if x.dims() != y.dims() {
        return false;
    }
    if x.is_zero() {
        return true;
    }
    let fs = hom_space(x, y);
    let gs = hom_space(y, x);
    fs.iter().any(|f| gs.iter().any(|g| g.compose(f).is_iso()))
}

#[derive(Clone, Debug)]
pub struct IndecCatalog<F: Field> {
    modules: Vec<MatrixRep<F>>,
    names: Vec<String>,
    /// `gram[i][j] = dim Hom(M_i, M_j)`.
    gram: Vec<Vec<usize>>,
    gram_inverse: ExactMatrix<Rationals>,
    projective_vertex: Vec<Option<usize>>,
    injective_vertex: Vec<Option<usize>>,
}

/// Smaller modules first; among equal sizes, mass at low vertices first.
fn sort_key<F: Field>(m: &MatrixRep<F>) -> (usize, Reverse<Vec<usize>>, Reverse<Vec<usize>>, Reverse<Vec<usize>>) {
    (m.total_dim(), Reverse(m.dims().to_vec()), Reverse(top_dims(m)), Reverse(socle_dims(m)))
}

fn unit_at(dims: &[usize]) -> Option<usize> {
    (dims.iter().sum::<usize>() == 1).then(|| dims.iter().position(|&d| d == 1)).flatten()
}

fn dims_label(dims: &[usize]) -> String {
    if dims.iter().all(|&d| d < 10) {
        dims.iter().map(|d| d.to_string()).collect()
    } else {
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl<F: Field> IndecCatalog<F> {
    pub fn build(pa: &PathAlgebra<F>, dim_cap: usize) -> Result<Self> {
        let alg = pa.algebra().clone();
        let field = pa.field().clone();
        let n = pa.n();
        let mut queue: VecDeque<MatrixRep<F>> = VecDeque::new();
        for v in 0..n {
            queue.push_back(MatrixRep::simple(alg.clone(), field.clone(), v));
        }
        for v in 0..n {
            queue.push_back(pa.projective(v));
            queue.push_back(pa.injective(v));
        }
        let mut found: Vec<MatrixRep<F>> = Vec::new();
        while let Some(candidate) = queue.pop_front() {
            for x in split_indecomposables(&candidate)? {
                if x.total_dim() > dim_cap || found.len() >= MAX_INDECOMPOSABLES {
                    return Err(Error::CatalogOverflow { cap: dim_cap });
                }
                if found.iter().any(|y| indecomposables_isomorphic(&x, y)) {
                    continue;
                }
                found.push(x.clone());
                queue.push_back(tau(pa, &x));
                queue.push_back(tau_inverse(pa, &x));
                queue.push_back(radical(&x));
                queue.push_back(socle_quotient(&x));
                for y in &found {
                    for (a, b) in [(&x, y), (y, &x)] {
                        let ext = Ext1Space::new(a, b);
                        for k in 0..ext.dim() {
                            let mut c = vec![field.zero(); ext.dim()];
                            c[k] = field.one();
                            queue.push_back(ext.middle_term(&c)?.0);
                        }
                    }
                }
            }
        }
        found.sort_by_key(sort_key);
        Self::from_modules(pa, found)
    }

    fn from_modules(pa: &PathAlgebra<F>, modules: Vec<MatrixRep<F>>) -> Result<Self> {
        let n = pa.n();
        let projectives: Vec<MatrixRep<F>> = (0..n).map(|v| pa.projective(v)).collect();
        let injectives: Vec<MatrixRep<F>> = (0..n).map(|v| pa.injective(v)).collect();
        let projective_vertex: Vec<Option<usize>> =
            modules.iter().map(|m| projectives.iter().position(|p| indecomposables_isomorphic(m, p))).collect();
        let injective_vertex: Vec<Option<usize>> =
            modules.iter().map(|m| injectives.iter().position(|p| indecomposables_isomorphic(m, p))).collect();
        let mut names: Vec<String> = modules
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if let Some(v) = unit_at(m.dims()) {
                    format!("S{}", v + 1)
                } else if let Some(v) = projective_vertex[i] {
                    format!("P{}", v + 1)
                } else if let Some(v) = injective_vertex[i] {
                    format!("I{}", v + 1)
                } else {
                    format!("M{}", dims_label(m.dims()))
                }
            })
            .collect();
        for i in 0..names.len() {
            let dup: Vec<usize> = (0..names.len()).filter(|&j| names[j] == names[i]).collect();
            if dup.len() > 1 {
                for (k, &j) in dup.iter().enumerate() {
                    names[j] = format!("{}{}", names[j], (b'a' + k as u8) as char);
                }
            }
        }
        let gram: Vec<Vec<usize>> =
            modules.iter().map(|a| modules.iter().map(|b| hom_dim(a, b)).collect()).collect();
        let rows: Vec<Vec<i64>> = gram.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        let gram_inverse = ExactMatrix::from_i64(Rationals, &rows)
            .inverse()
            .ok_or_else(|| Error::DecompositionFailure("Hom Gram matrix of the catalog is singular".into()))?;
        Ok(IndecCatalog { modules, names, gram, gram_inverse, projective_vertex, injective_vertex })
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn modules(&self) -> &[MatrixRep<F>] {
        &self.modules
    }

    pub fn module(&self, i: usize) -> &MatrixRep<F> {
        &self.modules[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn gram(&self) -> &[Vec<usize>] {
        &self.gram
    }

    /// Vertex `v` with `M_i ≅ P_v`, if projective.
    pub fn projective_vertex(&self, i: usize) -> Option<usize> {
        self.projective_vertex[i]
    }

    pub fn injective_vertex(&self, i: usize) -> Option<usize> {
        self.injective_vertex[i]
    }

    /// Catalog index of the indecomposable projective `P_v`.
    pub fn projective_index(&self, v: usize) -> usize {
        self.projective_vertex.iter().position(|p| *p == Some(v)).expect("projectives are in the catalog")
    }

    pub fn injective_index(&self, v: usize) -> usize {
        self.injective_vertex.iter().position(|p| *p == Some(v)).expect("injectives are in the catalog")
    }

    /// Multiplicity of each catalog member as a summand of `m`, from the
    /// profile `N ↦ dim Hom(N, m)`.
    pub fn decompose(&self, m: &MatrixRep<F>) -> Result<Vec<usize>> {
        let profile: Vec<BigRational> =
            self.modules.iter().map(|n| BigRational::from_integer(hom_dim(n, m).into())).collect();
        // gram[N][X] mult_X = profile_N, so mult = gram^{-1} profile
        let sol = self.gram_inverse.apply(&profile);
        let mut mults = Vec::with_capacity(sol.len());
        for v in sol {
            if !v.is_integer() || v.is_negative() {
                return Err(Error::DecompositionFailure(format!(
                    "Hom profile of a module with dimension vector {:?} is not a non-negative combination",
                    m.dims()
                )));
            }
            mults.push(v.to_integer().to_usize().expect("small multiplicity"));
        }
        let mut dims = vec![0usize; m.dims().len()];
        for (k, &c) in mults.iter().enumerate() {
            for (d, x) in dims.iter_mut().zip(self.modules[k].dims()) {
                *d += c * x;
            }
        }
        if dims != m.dims() {
            return Err(Error::DecompositionFailure(format!(
                "catalog summands do not add up to dimension vector {:?}",
                m.dims()
            )));
        }
        Ok(mults)
    }

    /// Render a multiplicity vector as `P1 + 2*S2`; `0` when empty.
    pub fn render(&self, mults: &[usize]) -> String {
        let parts: Vec<String> = mults
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| if c == 1 { self.names[i].clone() } else { format!("{c}*{}", self.names[i]) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Summands of `m` as a list of catalog indices with repetition.
    pub fn summands(&self, m: &MatrixRep<F>) -> Result<Vec<usize>> {
        let mults = self.decompose(m)?;
        Ok(mults.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect())
    }
}

impl<F: Field> IndecCatalog<F> {
    /// Whether every entry of the multiplicity vector is zero.
    pub fn is_zero_multiset(mults: &[usize]) -> bool {
        mults.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::PrimeField;
    use crate::quiverrep::quiver::{linear_a, oriented_a, preprojective_a2, Algebra, Quiver};
    use std::sync::Arc;

    fn catalog<F: Field>(alg: Algebra, f: F) -> IndecCatalog<F> {
        let pa = PathAlgebra::new(Arc::new(alg), f).unwrap();
        IndecCatalog::build(&pa, DEFAULT_DIM_CAP).unwrap()
    }

    #[test]
    fn a2_catalog() {
        let c = catalog(linear_a(2), Rationals);
        assert_eq!(c.names(), &["S1", "S2", "P1"]);
        assert_eq!(c.module(2).dims(), &[1, 1]);
    }

    #[test]
    fn a3_catalogs_have_six_members() {
        for o in [[true, true], [true, false], [false, true], [false, false]] {
            let c = catalog(oriented_a(&o), PrimeField::new(5).unwrap());
            assert_eq!(c.len(), 6, "orientation {o:?}");
        }
    }

    #[test]
    fn a4_has_ten() {
        assert_eq!(catalog(linear_a(4), Rationals).len(), 10);
    }

    #[test]
    fn preprojective_a2_catalog() {
        let c = catalog(preprojective_a2(), Rationals);
        assert_eq!(c.names(), &["S1", "S2", "P1", "P2"]);
    }

    #[test]
    fn kronecker_overflows() {
        let q = Quiver::from_arrows(2, &[("a", 1, 2), ("b", 1, 2)]).unwrap();
        let pa = PathAlgebra::new(Arc::new(Algebra::path_algebra(q)), Rationals).unwrap();
        assert!(matches!(IndecCatalog::build(&pa, 8), Err(Error::CatalogOverflow { cap: 8 })));
    }

    #[test]
    fn decompose_examples() {
        let c = catalog(linear_a(2), Rationals);
        let s1 = c.module(0).clone();
        assert_eq!(c.decompose(&s1).unwrap(), vec![1, 0, 0]);
        assert_eq!(c.decompose(&s1.direct_sum(&s1)).unwrap(), vec![2, 0, 0]);
        let ext = Ext1Space::new(c.module(0), c.module(1));
        let (e, _, _) = ext.middle_term(&[Rationals.one()]).unwrap();
        assert_eq!(c.render(&c.decompose(&e).unwrap()), "P1");
        let (split, _, _) = ext.middle_term(&[Rationals.zero()]).unwrap();
        assert_eq!(c.render(&c.decompose(&split).unwrap()), "S1 + S2");
    }

    #[test]
    fn splitting_a_direct_sum() {
        let c = catalog(linear_a(3), Rationals);
        let m = c.module(5).direct_sum(c.module(0)).direct_sum(c.module(5));
        let parts = split_indecomposables(&m).unwrap();
        assert_eq!(parts.len(), 3);
    }
}
