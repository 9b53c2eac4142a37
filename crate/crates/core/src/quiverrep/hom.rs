//! Hom spaces, kernels, images and quotients of representations.

use crate::exactalg::{ExactMatrix, Field};

use super::rep::{MatrixRep, ModMap};

/// Matrix of a linear operator given as a closure, built column by column
/// from unit vectors.
pub fn operator_matrix<F: Field>(
    field: &F,
    dim_in: usize,
    dim_out: usize,
    op: impl Fn(&[F::Elem]) -> Vec<F::Elem>,
) -> ExactMatrix<F> {
    let cols: Vec<Vec<F::Elem>> = (0..dim_in)
        .map(|i| {
            let mut e = vec![field.zero(); dim_in];
            e[i] = field.one();
            op(&e)
        })
        .collect();
    ExactMatrix::from_columns(field.clone(), dim_out, &cols)
}

/// Cut a flat vector into row-major blocks of the given shapes.
pub fn unflatten<F: Field>(field: &F, flat: &[F::Elem], shapes: &[(usize, usize)]) -> Vec<ExactMatrix<F>> {
    let mut out = Vec::with_capacity(shapes.len());
    let mut at = 0;
    for &(r, c) in shapes {
        let rows = (0..r).map(|i| flat[at + i * c..at + (i + 1) * c].to_vec()).collect();
        out.push(ExactMatrix::from_rows(field.clone(), c, rows).expect("block shape"));
        at += r * c;
    }
    assert_eq!(at, flat.len(), "flat vector length");
    out
}

/// Block shapes of a vertexwise map `x -> y`.
pub fn map_shapes(source: &[usize], target: &[usize]) -> Vec<(usize, usize)> {
    source.iter().zip(target).map(|(&s, &t)| (t, s)).collect()
}

/// Block shapes of an arrowwise cochain `x -> y`: one `y_t x x_s` block per arrow.
pub fn cochain_shapes<F: Field>(x: &MatrixRep<F>, y: &MatrixRep<F>) -> Vec<(usize, usize)> {
    x.algebra().quiver().arrows().iter().map(|a| (y.dim(a.target), x.dim(a.source))).collect()
}

pub fn map_from_flat<F: Field>(field: &F, flat: &[F::Elem], source: &[usize], target: &[usize]) -> ModMap<F> {
    ModMap { blocks: unflatten(field, flat, &map_shapes(source, target)) }
}

/// `δ(f)_a = f_t X_a − Y_a f_s` for every arrow `a: s -> t`.
pub fn coboundary<F: Field>(x: &MatrixRep<F>, y: &MatrixRep<F>, f: &ModMap<F>) -> Vec<ExactMatrix<F>> {
    x.algebra()
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| f.blocks[a.target].mul(x.arrow_matrix(i)).sub(&y.arrow_matrix(i).mul(&f.blocks[a.source])))
        .collect()
}

pub fn coboundary_matrix<F: Field>(x: &MatrixRep<F>, y: &MatrixRep<F>) -> ExactMatrix<F> {
    let field = x.field();
    let n_in: usize = x.dims().iter().zip(y.dims()).map(|(a, b)| a * b).sum();
    let n_out: usize = cochain_shapes(x, y).iter().map(|(r, c)| r * c).sum();
    operator_matrix(field, n_in, n_out, |v| {
        let f = map_from_flat(field, v, x.dims(), y.dims());
        coboundary(x, y, &f).iter().flat_map(|m| m.entries().to_vec()).collect()
    })
}

/// Basis of `Hom(x, y)`: solutions of every naturality square.
pub fn hom_space<F: Field>(x: &MatrixRep<F>, y: &MatrixRep<F>) -> Vec<ModMap<F>> {
    let field = x.field();
    coboundary_matrix(x, y)
        .kernel_basis()
        .iter()
        .map(|v| map_from_flat(field, v, x.dims(), y.dims()))
        .collect()
}

pub fn hom_dim<F: Field>(x: &MatrixRep<F>, y: &MatrixRep<F>) -> usize {
    let m = coboundary_matrix(x, y);
    m.cols() - m.rank()
}

/// A morphism `u: a -> b` with `u ∘ f = g`, if one exists.
pub fn extend_along<F: Field>(a: &MatrixRep<F>, b: &MatrixRep<F>, f: &ModMap<F>, g: &ModMap<F>) -> Option<ModMap<F>> {
    let field = a.field();
    let basis = hom_space(a, b);
    let target = g.flatten();
    let cols: Vec<Vec<F::Elem>> = basis.iter().map(|h| h.compose(f).flatten()).collect();
    let c = ExactMatrix::from_columns(field.clone(), target.len(), &cols).solve(&target).ok()??;
    Some(ModMap::combination(field, &c, &basis, a.dims(), b.dims()))
}

/// Column bases of the vertexwise kernels of `f`.
pub fn kernel_bases<F: Field>(f: &ModMap<F>) -> Vec<ExactMatrix<F>> {
    f.blocks.iter().map(|b| b.kernel_matrix()).collect()
}

/// Column bases of the vertexwise images of `f`.
pub fn image_bases<F: Field>(f: &ModMap<F>) -> Vec<ExactMatrix<F>> {
    f.blocks.iter().map(|b| b.column_space()).collect()
}

/// Kernel of `f: source -> _` with its inclusion.
pub fn kernel_module<F: Field>(source: &MatrixRep<F>, f: &ModMap<F>) -> (MatrixRep<F>, ModMap<F>) {
    let bases = kernel_bases(f);
    let k = source.restrict(&bases).expect("kernels are submodules");
    (k, ModMap { blocks: bases })
}

/// Image of `f: _ -> target` with its inclusion.
pub fn image_module<F: Field>(target: &MatrixRep<F>, f: &ModMap<F>) -> (MatrixRep<F>, ModMap<F>) {
    let bases = image_bases(f);
    let im = target.restrict(&bases).expect("images are submodules");
    (im, ModMap { blocks: bases })
}

/// Coordinates complementary to the column span of `basis`: the standard
/// basis vectors at the non-pivot rows of its echelon form.
pub fn complement_coordinates<F: Field>(basis: &ExactMatrix<F>) -> Vec<usize> {
    let pivots = basis.transpose().rref().pivots;
    (0..basis.rows()).filter(|r| !pivots.contains(r)).collect()
}

/// Quotient of `m` by the submodule spanned vertexwise by `sub`, using the
/// standard complement; returns the quotient and the projection.
pub fn quotient_module<F: Field>(m: &MatrixRep<F>, sub: &[ExactMatrix<F>]) -> (MatrixRep<F>, ModMap<F>) {
    let field = m.field();
    let mut proj = Vec::with_capacity(sub.len());
    let mut sections = Vec::with_capacity(sub.len());
    for (v, basis) in sub.iter().enumerate() {
        let d = m.dim(v);
        let comp = complement_coordinates(basis);
        let mut section = ExactMatrix::zeros(field.clone(), d, comp.len());
        for (j, &c) in comp.iter().enumerate() {
            section.set(c, j, field.one());
        }
        let full = basis.hstack(&section);
        let inv = full.inverse().expect("basis plus complement is invertible");
        let rows: Vec<usize> = (basis.cols()..d).collect();
        let cols: Vec<usize> = (0..d).collect();
        proj.push(inv.submatrix(&rows, &cols));
        sections.push(section);
    }
    let q = m.algebra().quiver();
    let dims: Vec<usize> = sections.iter().map(|s| s.cols()).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| proj[a.target].mul(m.arrow_matrix(i)).mul(&sections[a.source]))
        .collect();
    let quot = MatrixRep::new_unchecked(m.algebra().clone(), field.clone(), dims, mats).expect("shapes");
    (quot, ModMap { blocks: proj })
}

/// Cokernel of `f: _ -> target` as a vertexwise quotient.
pub fn naive_cokernel<F: Field>(target: &MatrixRep<F>, f: &ModMap<F>) -> (MatrixRep<F>, ModMap<F>) {
    quotient_module(target, &image_bases(f))
}

/// Radical `rad M = Σ_a im M_a`, vertexwise column bases.
pub fn radical_bases<F: Field>(m: &MatrixRep<F>) -> Vec<ExactMatrix<F>> {
    let q = m.algebra().quiver();
    (0..q.n_vertices())
        .map(|v| {
            let mut acc = ExactMatrix::zeros(m.field().clone(), m.dim(v), 0);
            for a in q.arrows_into(v) {
                acc = acc.hstack(m.arrow_matrix(a));
            }
            acc.column_space()
        })
        .collect()
}

/// Socle `soc M = ∩_a ker M_a`, vertexwise column bases.
pub fn socle_bases<F: Field>(m: &MatrixRep<F>) -> Vec<ExactMatrix<F>> {
    let q = m.algebra().quiver();
    (0..q.n_vertices())
        .map(|v| {
            let mut acc = ExactMatrix::zeros(m.field().clone(), 0, m.dim(v));
            for a in q.arrows_from(v) {
                acc = acc.vstack(m.arrow_matrix(a));
            }
            acc.kernel_matrix()
        })
        .collect()
}

pub fn top_dims<F: Field>(m: &MatrixRep<F>) -> Vec<usize> {
    radical_bases(m).iter().zip(m.dims()).map(|(b, d)| d - b.cols()).collect()
}

pub fn socle_dims<F: Field>(m: &MatrixRep<F>) -> Vec<usize> {
    socle_bases(m).iter().map(|b| b.cols()).collect()
}

/// Inclusion of a direct summand or the projection onto it, for a direct
/// sum built by [`MatrixRep::direct_sum`].
pub fn summand_inclusion<F: Field>(field: &F, parts: &[&[usize]], which: usize) -> ModMap<F> {
    let n = parts[0].len();
    let blocks = (0..n)
        .map(|v| {
            let total: usize = parts.iter().map(|p| p[v]).sum();
            let offset: usize = parts[..which].iter().map(|p| p[v]).sum();
            let d = parts[which][v];
            let mut m = ExactMatrix::zeros(field.clone(), total, d);
            for i in 0..d {
                m.set(offset + i, i, field.one());
            }
            m
        })
        .collect();
    ModMap { blocks }
}

pub fn summand_projection<F: Field>(field: &F, parts: &[&[usize]], which: usize) -> ModMap<F> {
    let inc = summand_inclusion(field, parts, which);
    ModMap { blocks: inc.blocks.iter().map(|b| b.transpose()).collect() }
}

/// Inclusion of the sub-sum formed by the parts listed in `which`.
pub fn parts_inclusion<F: Field>(field: &F, n: usize, parts: &[&[usize]], which: &[usize]) -> ModMap<F> {
    let mut blocks: Vec<ExactMatrix<F>> = (0..n)
        .map(|v| ExactMatrix::zeros(field.clone(), parts.iter().map(|p| p[v]).sum(), 0))
        .collect();
    for &w in which {
        let inc = summand_inclusion(field, parts, w);
        for (b, i) in blocks.iter_mut().zip(&inc.blocks) {
            *b = b.hstack(i);
        }
    }
    ModMap { blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};
    use crate::quiverrep::pathalg::PathAlgebra;
    use crate::quiverrep::quiver::linear_a;
    use std::sync::Arc;

    fn a2() -> (Arc<crate::quiverrep::quiver::Algebra>, PathAlgebra<Rationals>) {
        let alg = Arc::new(linear_a(2));
        let pa = PathAlgebra::new(alg.clone(), Rationals).unwrap();
        (alg, pa)
    }

    #[test]
    fn hom_dimensions_on_a2() {
        let (alg, pa) = a2();
        let s1 = MatrixRep::simple(alg.clone(), Rationals, 0);
        let s2 = MatrixRep::simple(alg.clone(), Rationals, 1);
        let p1 = pa.projective(0);
        assert_eq!(hom_dim(&s1, &s1), 1);
        assert_eq!(hom_dim(&s1, &s2), 0);
        assert_eq!(hom_dim(&p1, &s1), 1);
        assert_eq!(hom_dim(&s2, &p1), 1);
        for f in hom_space(&p1, &s1) {
            assert!(f.is_morphism(&p1, &s1));
        }
    }

    #[test]
    fn kernel_of_projection_is_socle() {
        let (alg, pa) = a2();
        let s1 = MatrixRep::simple(alg.clone(), Rationals, 0);
        let p1 = pa.projective(0);
        let f = hom_space(&p1, &s1).pop().unwrap();
        let (k, inc) = kernel_module(&p1, &f);
        assert_eq!(k.dims(), &[0, 1]);
        assert!(inc.is_morphism(&k, &p1));
        let zero = ModMap::zero(&Rationals, p1.dims(), s1.dims());
        assert_eq!(kernel_module(&p1, &zero).0.dims(), p1.dims());
        let id = ModMap::identity(&Rationals, p1.dims());
        assert!(kernel_module(&p1, &id).0.is_zero());
    }

    #[test]
    fn cokernel_of_socle_inclusion() {
        let alg = Arc::new(linear_a(2));
        let f5 = PrimeField::new(5).unwrap();
        let pa = PathAlgebra::new(alg.clone(), f5).unwrap();
        let s2 = MatrixRep::simple(alg, f5, 1);
        let p1 = pa.projective(0);
        let f = hom_space(&s2, &p1).pop().unwrap();
        let (c, proj) = naive_cokernel(&p1, &f);
        assert_eq!(c.dims(), &[1, 0]);
        assert!(proj.is_morphism(&p1, &c));
    }

    #[test]
    fn top_and_socle() {
        let (_, pa) = a2();
        let p1 = pa.projective(0);
        assert_eq!(top_dims(&p1), vec![1, 0]);
        assert_eq!(socle_dims(&p1), vec![0, 1]);
    }
}

