//! Finite-dimensional quotients `kQ/I` as explicit vector spaces.
//!
//! For `K = 1, 2, ...` we compute `kQ/(I + J^{K+1})` by row reducing the
//! truncated ideal elements `u*r*v` against all paths of length at most `K`,
//! longest paths first so that pivots (non-standard paths) are as long as
//! possible. Once every path of length `K` reduces to zero we have
//! `J^K ⊆ I`, and the standard monomials form a basis of the algebra.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Field};

use super::quiver::Algebra;
use super::rep::MatrixRep;

const MAX_PATH_LENGTH: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `other`; panics if not composable.
    pub fn concat(&self, other: &Path) -> Path {
        assert_eq!(self.target, other.source, "paths not composable");
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Path { source: self.source, target: other.target, arrows }
    }
}

#[derive(Clone, Debug)]
pub struct PathAlgebra<F: Field> {
    algebra: Arc<Algebra>,
    field: F,
    /// Every path of at least this length is zero in the algebra.
    vanishing_length: usize,
    basis: Vec<Vec<Vec<Path>>>,
    index: HashMap<Path, usize>,
    reduced: HashMap<Path, Vec<F::Elem>>,
}

fn paths_up_to(algebra: &Algebra, max_len: usize) -> Vec<Path> {
    let q = algebra.quiver();
    let mut all: Vec<Path> = (0..q.n_vertices()).map(Path::trivial).collect();
    let mut frontier = all.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.arrows_from(p.target) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path { source: p.source, target: q.arrow(a).target, arrows });
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

impl<F: Field> PathAlgebra<F> {
    pub fn new(algebra: Arc<Algebra>, field: F) -> Result<Self> {
        for k in 1..=MAX_PATH_LENGTH {
            if let Some(pa) = Self::try_truncation(&algebra, &field, k) {
                return Ok(pa);
            }
        }
        Err(Error::NotAdmissible(format!(
            "paths of length {MAX_PATH_LENGTH} do not vanish; the algebra is infinite dimensional or the relations are not admissible"
        )))
    }

    fn try_truncation(algebra: &Arc<Algebra>, field: &F, k: usize) -> Option<Self> {
        let n = algebra.n();
        let q = algebra.quiver();
        let paths = paths_up_to(algebra, k);
        let mut by_ends: Vec<Vec<Vec<Path>>> = vec![vec![Vec::new(); n]; n];
        for p in &paths {
            by_ends[p.source][p.target].push(p.clone());
        }
        // ideal generators u*r*v, truncated at length k
        let mut gens: Vec<Vec<Vec<HashMap<Path, F::Elem>>>> = vec![vec![Vec::new(); n]; n];
        for rel in &algebra.relations().relations {
            let (rs, rt) = q.path_ends(&rel.terms[0].1).expect("validated relation");
            for u in paths.iter().filter(|u| u.target == rs) {
                for v in paths.iter().filter(|v| v.source == rt) {
                    let mut elem: HashMap<Path, F::Elem> = HashMap::new();
                    for (c, body) in &rel.terms {
                        let len = u.len() + body.len() + v.len();
                        if len > k {
                            continue;
                        }
                        let mut arrows = u.arrows.clone();
                        arrows.extend_from_slice(body);
                        arrows.extend_from_slice(&v.arrows);
                        let p = Path { source: u.source, target: v.target, arrows };
                        let entry = elem.entry(p).or_insert_with(|| field.zero());
                        *entry = field.add(entry, &field.from_i64(*c));
                    }
                    elem.retain(|_, c| !field.is_zero(c));
                    if !elem.is_empty() {
                        gens[u.source][v.target].push(elem);
                    }
                }
            }
        }

        let mut basis = vec![vec![Vec::new(); n]; n];
        let mut index = HashMap::new();
        let mut reduced = HashMap::new();
        for s in 0..n {
            for t in 0..n {
                let mut cols = by_ends[s][t].clone();
                cols.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.arrows.cmp(&b.arrows)));
                let pos: HashMap<&Path, usize> = cols.iter().enumerate().map(|(i, p)| (p, i)).collect();
                let rows: Vec<Vec<F::Elem>> = gens[s][t]
                    .iter()
                    .map(|g| {
                        let mut row = vec![field.zero(); cols.len()];
                        for (p, c) in g {
                            row[pos[p]] = c.clone();
                        }
                        row
                    })
                    .collect();
                let rref = if rows.is_empty() {
                    None
                } else {
                    Some(ExactMatrix::from_rows(field.clone(), cols.len(), rows).expect("row lengths").rref())
                };
                let pivots: Vec<usize> = rref.as_ref().map(|r| r.pivots.clone()).unwrap_or_default();
                let mut standard: Vec<usize> = (0..cols.len()).filter(|c| !pivots.contains(c)).collect();
                standard.sort_by(|&a, &b| cols[a].len().cmp(&cols[b].len()).then_with(|| cols[a].arrows.cmp(&cols[b].arrows)));
                if standard.iter().any(|&c| cols[c].len() == k) {
                    return None;
                }
                let std_pos: HashMap<usize, usize> = standard.iter().enumerate().map(|(i, &c)| (c, i)).collect();
                if let Some(r) = &rref {
                    for (row, &pc) in r.pivots.iter().enumerate() {
                        let mut nf = vec![field.zero(); standard.len()];
                        for (&c, &i) in &std_pos {
                            nf[i] = field.neg(r.matrix.get(row, c));
                        }
                        if cols[pc].len() == k && nf.iter().any(|x| !field.is_zero(x)) {
                            return None;
                        }
                        reduced.insert(cols[pc].clone(), nf);
                    }
                }
                for (i, &c) in standard.iter().enumerate() {
                    index.insert(cols[c].clone(), i);
                }
                basis[s][t] = standard.iter().map(|&c| cols[c].clone()).collect();
            }
        }
        Some(PathAlgebra { algebra: algebra.clone(), field: field.clone(), vanishing_length: k, basis, index, reduced })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.algebra.n()
    }

    pub fn vanishing_length(&self) -> usize {
        self.vanishing_length
    }

    /// Standard paths from `s` to `t`: a basis of `e_s A e_t` in our
    /// left-to-right path convention.
    pub fn basis(&self, s: usize, t: usize) -> &[Path] {
        &self.basis[s][t]
    }

    pub fn dim(&self) -> usize {
        self.basis.iter().flatten().map(|b| b.len()).sum()
    }

    /// Coordinates of a path in the standard basis of its endpoints.
    pub fn normal_form(&self, p: &Path) -> Vec<F::Elem> {
        let dim = self.basis[p.source][p.target].len();
        if let Some(&i) = self.index.get(p) {
            let mut v = vec![self.field.zero(); dim];
            v[i] = self.field.one();
            return v;
        }
        if let Some(nf) = self.reduced.get(p) {
            return nf.clone();
        }
        // every path of this length lies in the ideal
        debug_assert!(p.len() >= self.vanishing_length);
        vec![self.field.zero(); dim]
    }

    /// Product of elements `x ∈ e_s A e_m` and `y ∈ e_m A e_t`, given by
    /// coordinates; `x` acts first.
    pub fn multiply(&self, s: usize, m: usize, t: usize, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.basis[s][t].len()];
        for (i, cx) in x.iter().enumerate() {
            if f.is_zero(cx) {
                continue;
            }
            for (j, cy) in y.iter().enumerate() {
                if f.is_zero(cy) {
                    continue;
                }
                let p = self.basis[s][m][i].concat(&self.basis[m][t][j]);
                let c = f.mul(cx, cy);
                for (o, v) in out.iter_mut().zip(self.normal_form(&p)) {
                    *o = f.add(o, &f.mul(&c, &v));
                }
            }
        }
        out
    }

    fn arrow_path(&self, a: usize) -> Path {
        let arr = self.algebra.quiver().arrow(a);
        Path { source: arr.source, target: arr.target, arrows: vec![a] }
    }

    /// Indecomposable projective `P_a`: at vertex `j` the paths `a -> j`,
    /// arrows acting by right multiplication.
    pub fn projective(&self, a: usize) -> MatrixRep<F> {
        let q = self.algebra.quiver();
        let dims: Vec<usize> = (0..self.n()).map(|j| self.basis[a][j].len()).collect();
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, arr)| {
                let src = &self.basis[a][arr.source];
                let cols: Vec<Vec<F::Elem>> =
                    src.iter().map(|p| self.normal_form(&p.concat(&self.arrow_path(ai)))).collect();
                ExactMatrix::from_columns(self.field.clone(), dims[arr.target], &cols)
            })
            .collect();
        MatrixRep::new_unchecked(self.algebra.clone(), self.field.clone(), dims, mats).expect("consistent shapes")
    }

    /// Indecomposable injective `I_a`: at vertex `j` the dual of the paths
    /// `j -> a`.
    pub fn injective(&self, a: usize) -> MatrixRep<F> {
        let q = self.algebra.quiver();
        let dims: Vec<usize> = (0..self.n()).map(|j| self.basis[j][a].len()).collect();
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, arr)| {
                // entry [q][p] = coefficient of p in NF(arrow * q)
                let rows: Vec<Vec<F::Elem>> = self.basis[arr.target][a]
                    .iter()
                    .map(|qp| self.normal_form(&self.arrow_path(ai).concat(qp)))
                    .collect();
                ExactMatrix::from_rows(self.field.clone(), dims[arr.source], rows).expect("row lengths")
            })
            .collect();
        MatrixRep::new_unchecked(self.algebra.clone(), self.field.clone(), dims, mats).expect("consistent shapes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;
    use crate::quiverrep::quiver::{linear_a, preprojective_a2, Quiver};

    #[test]
    fn linear_a3_dimensions() {
        let pa = PathAlgebra::new(Arc::new(linear_a(3)), Rationals).unwrap();
        assert_eq!(pa.dim(), 6);
        assert_eq!(pa.projective(0).dims(), &[1, 1, 1]);
        assert_eq!(pa.injective(0).dims(), &[1, 0, 0]);
        assert_eq!(pa.injective(2).dims(), &[1, 1, 1]);
        pa.projective(0).check_relations().unwrap();
    }

    #[test]
    fn preprojective_a2_is_four_dimensional() {
        let pa = PathAlgebra::new(Arc::new(preprojective_a2()), Rationals).unwrap();
        assert_eq!(pa.dim(), 4);
        let p1 = pa.projective(0);
        assert_eq!(p1.dims(), &[1, 1]);
        p1.check_relations().unwrap();
        pa.injective(1).check_relations().unwrap();
    }

    #[test]
    fn commutative_square() {
        let q = Quiver::from_arrows(4, &[("a", 1, 2), ("b", 2, 4), ("c", 1, 3), ("d", 3, 4)]).unwrap();
        let alg = Algebra::with_relations(q, &[vec![(1, "a*b"), (-1, "c*d")]]).unwrap();
        let pa = PathAlgebra::new(Arc::new(alg), Rationals).unwrap();
        assert_eq!(pa.basis(0, 3).len(), 1);
        let p1 = pa.projective(0);
        assert_eq!(p1.dims(), &[1, 1, 1, 1]);
        p1.check_relations().unwrap();
        pa.injective(3).check_relations().unwrap();
    }

    #[test]
    fn oriented_cycle_without_relations_is_rejected() {
        let q = Quiver::from_arrows(2, &[("a", 1, 2), ("b", 2, 1)]).unwrap();
        assert!(PathAlgebra::new(Arc::new(Algebra::path_algebra(q)), Rationals).is_err());
    }
}
