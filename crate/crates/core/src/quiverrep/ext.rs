//! First extension groups as cocycles modulo coboundaries.
//!
//! An extension `0 -> Y -> E -> X -> 0` of representations can be written
//! with arrow matrices `E_a = [[Y_a, ξ_a], [0, X_a]]`. Such an `E` satisfies
//! the relations exactly when every relation's upper-right block vanishes,
//! which is a linear condition on `ξ`. Two cochains give isomorphic
//! extensions iff they differ by `δ(f)_a = f_t X_a − Y_a f_s`.

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Field};

use super::hom::{cochain_shapes, coboundary_matrix, operator_matrix, unflatten};
use super::rep::{MatrixRep, ModMap};

/// One matrix per arrow, `ξ_a: X_{s(a)} -> Y_{t(a)}`.
pub type Cochain<F> = Vec<ExactMatrix<F>>;

fn flatten<F: Field>(c: &[ExactMatrix<F>]) -> Vec<F::Elem> {
    c.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

/// Upper-right blocks of every relation evaluated on the extension built from `xi`.
pub fn linearized_relations<F: Field>(x: &MatrixRep<F>, y: &MatrixRep<F>, xi: &[ExactMatrix<F>]) -> Vec<ExactMatrix<F>> {
    let alg = x.algebra();
    let q = alg.quiver();
    let field = x.field();
    alg.relations()
        .relations
        .iter()
        .map(|rel| {
            let (s, t) = q.path_ends(&rel.terms[0].1).expect("validated relation");
            let mut acc = ExactMatrix::zeros(field.clone(), y.dim(t), x.dim(s));
            for (c, path) in &rel.terms {
                for i in 0..path.len() {
                    let before = if i == 0 {
                        ExactMatrix::identity(field.clone(), x.dim(s))
                    } else {
                        x.path_matrix(&path[..i])
                    };
                    let after = if i + 1 == path.len() {
                        ExactMatrix::identity(field.clone(), y.dim(t))
                    } else {
                        y.path_matrix(&path[i + 1..])
                    };
                    let term = after.mul(&xi[path[i]]).mul(&before);
                    acc = acc.add(&term.scale(&field.from_i64(*c)));
                }
            }
            acc
        })
        .collect()
}

/// `Ext¹(x, y)` with a fixed basis of cocycle representatives.
#[derive(Clone, Debug)]
pub struct Ext1Space<F: Field> {
    pub x: MatrixRep<F>,
    pub y: MatrixRep<F>,
    shapes: Vec<(usize, usize)>,
    reps: Vec<Cochain<F>>,
    /// Columns: flattened representatives, then coboundary generators.
    solver: ExactMatrix<F>,
    cocycle_test: ExactMatrix<F>,
}

impl<F: Field> Ext1Space<F> {
    pub fn new(x: &MatrixRep<F>, y: &MatrixRep<F>) -> Self {
        let field = x.field().clone();
        let shapes = cochain_shapes(x, y);
        let n: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let rel_shapes: Vec<usize> = linearized_relations(x, y, &unflatten(&field, &vec![field.zero(); n], &shapes))
            .iter()
            .map(|m| m.rows() * m.cols())
            .collect();
        let cocycle_test = operator_matrix(&field, n, rel_shapes.iter().sum(), |v| {
            flatten(&linearized_relations(x, y, &unflatten(&field, v, &shapes)))
        });
        let cocycles = cocycle_test.kernel_basis();
        let boundaries = coboundary_matrix(x, y).column_space();
        let mut span = boundaries.clone();
        let mut rank = span.cols();
        let mut chosen = Vec::new();
        for z in cocycles {
            let col = ExactMatrix::from_columns(field.clone(), n, std::slice::from_ref(&z));
            let candidate = span.hstack(&col);
            let r = candidate.rank();
            if r > rank {
                rank = r;
                span = candidate;
                chosen.push(z);
            }
        }
        let reps_mat = ExactMatrix::from_columns(field.clone(), n, &chosen);
        let solver = reps_mat.hstack(&boundaries);
        let reps = chosen.iter().map(|z| unflatten(&field, z, &shapes)).collect();
        Ext1Space { x: x.clone(), y: y.clone(), shapes, reps, solver, cocycle_test }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn basis(&self) -> &[Cochain<F>] {
        &self.reps
    }

    pub fn shapes(&self) -> &[(usize, usize)] {
        &self.shapes
    }

    pub fn field(&self) -> &F {
        self.x.field()
    }

    /// The cocycle `Σ c_k ξ_k`.
    pub fn cocycle(&self, coeffs: &[F::Elem]) -> Cochain<F> {
        assert_eq!(coeffs.len(), self.dim());
        let f = self.field();
        let mut out: Cochain<F> = self.shapes.iter().map(|&(r, c)| ExactMatrix::zeros(f.clone(), r, c)).collect();
        for (c, rep) in coeffs.iter().zip(&self.reps) {
            if f.is_zero(c) {
                continue;
            }
            for (o, m) in out.iter_mut().zip(rep) {
                *o = o.add(&m.scale(c));
            }
        }
        out
    }

    pub fn is_cocycle(&self, xi: &[ExactMatrix<F>]) -> bool {
        self.cocycle_test.apply(&flatten(xi)).iter().all(|v| self.field().is_zero(v))
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn coordinates(&self, xi: &[ExactMatrix<F>]) -> Result<Vec<F::Elem>> {
        if !self.is_cocycle(xi) {
            return Err(Error::RelationViolation("cochain is not a cocycle".into()));
        }
        let sol = self
            .solver
            .solve(&flatten(xi))?
            .ok_or_else(|| Error::RelationViolation("cocycle outside the computed span".into()))?;
        Ok(sol[..self.dim()].to_vec())
    }

    /// Middle term `E` with `i: y -> E` and `p: E -> x`.
    pub fn middle_term(&self, coeffs: &[F::Elem]) -> Result<(MatrixRep<F>, ModMap<F>, ModMap<F>)> {
        middle_term_of_cocycle(&self.x, &self.y, &self.cocycle(coeffs))
    }

    /// Pullback along `f: x' -> x`, as coordinates in `ext` = `Ext¹(x', y)`.
    pub fn pullback(&self, coeffs: &[F::Elem], f: &ModMap<F>, ext: &Ext1Space<F>) -> Result<Vec<F::Elem>> {
        let xi = self.cocycle(coeffs);
        let q = self.x.algebra().quiver();
        let pulled: Cochain<F> = q.arrows().iter().zip(&xi).map(|(a, m)| m.mul(&f.blocks[a.source])).collect();
        ext.coordinates(&pulled)
    }

    /// Pushout along `g: y -> y'`, as coordinates in `ext` = `Ext¹(x, y')`.
    pub fn pushout(&self, coeffs: &[F::Elem], g: &ModMap<F>, ext: &Ext1Space<F>) -> Result<Vec<F::Elem>> {
        let xi = self.cocycle(coeffs);
        let q = self.x.algebra().quiver();
        let pushed: Cochain<F> = q.arrows().iter().zip(&xi).map(|(a, m)| g.blocks[a.target].mul(m)).collect();
        ext.coordinates(&pushed)
    }
}

/// The extension `0 -> y -> E -> x -> 0` with `E_a = [[y_a, ξ_a], [0, x_a]]`.
pub fn middle_term_of_cocycle<F: Field>(
    x: &MatrixRep<F>,
    y: &MatrixRep<F>,
    xi: &[ExactMatrix<F>],
) -> Result<(MatrixRep<F>, ModMap<F>, ModMap<F>)> {
    let field = x.field().clone();
    let q = x.algebra().quiver();
    let dims: Vec<usize> = x.dims().iter().zip(y.dims()).map(|(a, b)| a + b).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let top = y.arrow_matrix(i).hstack(&xi[i]);
            let bottom = ExactMatrix::zeros(field.clone(), x.dim(a.target), y.dim(a.source)).hstack(x.arrow_matrix(i));
            top.vstack(&bottom)
        })
        .collect();
    let e = MatrixRep::new(x.algebra().clone(), field.clone(), dims, mats)?;
    let parts: [&[usize]; 2] = [y.dims(), x.dims()];
    let inc = super::hom::summand_inclusion(&field, &parts, 0);
    let proj = super::hom::summand_projection(&field, &parts, 1);
    Ok((e, inc, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;
    use crate::quiverrep::pathalg::PathAlgebra;
    use crate::quiverrep::quiver::{linear_a, preprojective_a2};
    use std::sync::Arc;

    #[test]
    fn ext_between_simples_of_a2() {
        let alg = Arc::new(linear_a(2));
        let s1 = MatrixRep::simple(alg.clone(), Rationals, 0);
        let s2 = MatrixRep::simple(alg, Rationals, 1);
        assert_eq!(Ext1Space::new(&s1, &s2).dim(), 1);
        assert_eq!(Ext1Space::new(&s2, &s1).dim(), 0);
    }

    #[test]
    fn nonsplit_extension_is_projective() {
        let alg = Arc::new(linear_a(2));
        let pa = PathAlgebra::new(alg.clone(), Rationals).unwrap();
        let s1 = MatrixRep::simple(alg.clone(), Rationals, 0);
        let s2 = MatrixRep::simple(alg, Rationals, 1);
        let ext = Ext1Space::new(&s1, &s2);
        let (e, i, p) = ext.middle_term(&[Rationals.one()]).unwrap();
        assert_eq!(e, pa.projective(0));
        assert!(i.is_morphism(&s2, &e));
        assert!(p.is_morphism(&e, &s1));
        assert!(p.compose(&i).is_zero());
    }

    #[test]
    fn preprojective_ext_respects_relations() {
        let alg = Arc::new(preprojective_a2());
        let s1 = MatrixRep::simple(alg.clone(), Rationals, 0);
        let s2 = MatrixRep::simple(alg, Rationals, 1);
        assert_eq!(Ext1Space::new(&s1, &s2).dim(), 1);
        assert_eq!(Ext1Space::new(&s2, &s1).dim(), 1);
        assert_eq!(Ext1Space::new(&s1, &s1).dim(), 0);
    }
}
