//! Morphisms `L -> ΣM`, their triangles `M -> Y -> L -> ΣM`, the F-image
//! sequences, and the duality pairing between `C(L, ΣM)` and `C(M, ΣL)`.
//!
//! A class in `C(L, ΣM)` has an extension component in `Ext¹(L, M)`, a
//! co-extension component `φ ∈ Hom(L, τM)`, and components through shifted
//! projectives. Only pure classes get a middle term:
//!
//! * extension: `Y` is the middle term of the extension, and `F` applied to
//!   the triangle is the short exact sequence itself;
//! * co-extension: `Y = ker φ ⊕ τ⁻¹(coker φ)`, where injective summands
//!   `I_j` of `coker φ` become `ΣP_j`. On F-images `Fi = (τ⁻¹q, 0)` and
//!   `Fp = (0, incl)`, with `q: τM -> coker φ`, and `FL -> FΣM` is `φ`.
//!
//! Summands on which the class vanishes (projective summands of `M` in the
//! co-extension case, shifted projectives) split off into `Y` unchanged.

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Field};
use crate::quiverrep::ext::Ext1Space;
use crate::quiverrep::hom::{
    extend_along, hom_space, kernel_module, naive_cokernel, parts_inclusion, quotient_module, summand_inclusion,
    summand_projection,
};
use crate::quiverrep::translate::{
    copresentation, injective_sum, presentation, tau_from, tau_inverse_from, PathMatrix, Presentation,
};
use crate::quiverrep::{MatrixRep, ModMap};

use super::{ClusterCategory, ClusterObject, ObjectKey};

/// `τ` of a module part, with the data needed to apply `τ⁻¹` to quotients.
#[derive(Clone, Debug)]
pub struct TauModel<F: Field> {
    /// The sum `M'` of the non-projective summands, and `M' -> M`.
    pub nonprojective: MatrixRep<F>,
    pub inclusion: ModMap<F>,
    pub presentation: Presentation<F>,
    /// `τM = τM' = ker(νP₁ -> νP₀)` and its inclusion into `νP₁`.
    pub tau: MatrixRep<F>,
    pub tau_inclusion: ModMap<F>,
}

/// `C(L, ΣM)` with a basis: extension classes, then co-extension maps, then
/// the components through shifted projectives.
#[derive(Clone, Debug)]
pub struct ShiftSpace<F: Field> {
    pub ext: Ext1Space<F>,
    pub tau_m: TauModel<F>,
    pub coext: Vec<ModMap<F>>,
    pub projective_part: usize,
}

impl<F: Field> ShiftSpace<F> {
    pub fn dim(&self) -> usize {
        self.ext.dim() + self.coext.len() + self.projective_part
    }

    pub fn field(&self) -> &F {
        self.ext.field()
    }

    /// The class with the given coordinates in the basis above.
    pub fn class(&self, coords: &[F::Elem]) -> ExtClass<F> {
        assert_eq!(coords.len(), self.dim());
        let (e, rest) = coords.split_at(self.ext.dim());
        let (c, p) = rest.split_at(self.coext.len());
        ExtClass { ext: e.to_vec(), coext: c.to_vec(), projective: p.to_vec() }
    }

    pub fn basis_class(&self, k: usize) -> ExtClass<F> {
        let f = self.field();
        let mut c = vec![f.zero(); self.dim()];
        c[k] = f.one();
        self.class(&c)
    }

    /// `φ = Σ c_k φ_k: L -> τM`.
    pub fn coext_map(&self, coeffs: &[F::Elem]) -> ModMap<F> {
        let f = self.field();
        ModMap::combination(f, coeffs, &self.coext, self.ext.x.dims(), self.tau_m.tau.dims())
    }
}

/// A class `ε ∈ C(L, ΣM)` split into its components.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtClass<F: Field> {
    pub ext: Vec<F::Elem>,
    pub coext: Vec<F::Elem>,
    pub projective: Vec<F::Elem>,
}

impl<F: Field> ExtClass<F> {
    pub fn coordinates(&self) -> Vec<F::Elem> {
        self.ext.iter().chain(&self.coext).chain(&self.projective).cloned().collect()
    }

    fn nonzero(f: &F, v: &[F::Elem]) -> bool {
        v.iter().any(|x| !f.is_zero(x))
    }

    pub fn is_zero(&self, f: &F) -> bool {
        !Self::nonzero(f, &self.ext) && !Self::nonzero(f, &self.coext) && !Self::nonzero(f, &self.projective)
    }

    /// At most one component is nonzero.
    pub fn is_pure(&self, f: &F) -> bool {
        [&self.ext, &self.coext, &self.projective].iter().filter(|v| Self::nonzero(f, v)).count() <= 1
    }
}

/// A triangle `M -> Y -> L -> ΣM` recorded through its F-image
/// `FM -> FY -> FL -> FΣM`.
#[derive(Clone, Debug)]
pub struct TriangleData<F: Field> {
    pub y: ObjectKey,
    pub fm: MatrixRep<F>,
    pub fy: MatrixRep<F>,
    pub fl: MatrixRep<F>,
    pub f_sigma_m: MatrixRep<F>,
    pub fi: ModMap<F>,
    pub fp: ModMap<F>,
    pub delta: ModMap<F>,
    pub eps: ExtClass<F>,
}

/// The checked four-term sequence and `g = dim ker Fi`.
#[derive(Clone, Debug)]
pub struct FImageSequence<F: Field> {
    pub modules: [MatrixRep<F>; 4],
    pub maps: [ModMap<F>; 3],
    pub g: Vec<usize>,
}

fn exact_at<F: Field>(first: &ModMap<F>, second: &ModMap<F>) -> bool {
    first.blocks.iter().zip(&second.blocks).all(|(a, b)| b.mul(a).is_zero() && b.cols() - b.rank() == a.rank())
}

/// Certify exactness of `FM -> FY -> FL -> FΣM` at `FY` and `FL`.
pub fn f_image_sequence<F: Field>(t: &TriangleData<F>) -> Result<FImageSequence<F>> {
    let checks = [
        (t.fi.is_morphism(&t.fm, &t.fy), "Fi is not a morphism"),
        (t.fp.is_morphism(&t.fy, &t.fl), "Fp is not a morphism"),
        (t.delta.is_morphism(&t.fl, &t.f_sigma_m), "FL -> FΣM is not a morphism"),
        (exact_at(&t.fi, &t.fp), "not exact at FY"),
        (exact_at(&t.fp, &t.delta), "not exact at FL"),
    ];
    if let Some((_, msg)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::ExactnessFailure((*msg).into()));
    }
    let g = t.fi.blocks.iter().map(|b| b.cols() - b.rank()).collect();
    Ok(FImageSequence {
        modules: [t.fm.clone(), t.fy.clone(), t.fl.clone(), t.f_sigma_m.clone()],
        maps: [t.fi.clone(), t.fp.clone(), t.delta.clone()],
        g,
    })
}

/// The pairing `C(L, ΣM) x C(M, ΣL) -> k`: composition into an `Ext¹`
/// space followed by a coordinate functional. `functional` lists the
/// coordinates that are summed.
#[derive(Clone, Debug)]
pub struct SerrePairing<F: Field> {
    pub matrix: ExactMatrix<F>,
    pub functional: Vec<usize>,
}

impl<F: Field> SerrePairing<F> {
    pub fn evaluate(&self, eps: &[F::Elem], eta: &[F::Elem]) -> F::Elem {
        let f = self.matrix.field();
        let me = self.matrix.apply(eta);
        eps.iter().zip(&me).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
    }
}

/// Subsets of `0..n` by size, then lexicographically, up to size 3, then
/// the full set.
fn functional_candidates(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    let mut out: Vec<Vec<usize>> = (1..=n.min(3)).flat_map(|k| (0..n).combinations(k)).collect();
    if n > 3 {
        out.push((0..n).collect());
    }
    out
}

impl<F: Field> ClusterCategory<F> {
    pub fn tau_model(&self, m: &ClusterObject<F>) -> TauModel<F> {
        let f = self.field();
        let copies = m.copies();
        let dims: Vec<&[usize]> = copies.iter().map(|&i| self.catalog.module(i).dims()).collect();
        let which: Vec<usize> =
            (0..copies.len()).filter(|&k| self.catalog.projective_vertex(copies[k]).is_none()).collect();
        let inclusion = parts_inclusion(f, self.n(), &dims, &which);
        let nonprojective = MatrixRep::direct_sum_all(
            self.pa.algebra().clone(),
            f.clone(),
            which.iter().map(|&k| self.catalog.module(copies[k])),
        );
        let pres = presentation(&self.pa, &nonprojective);
        let (tau, tau_inclusion) = tau_from(&self.pa, &pres);
        TauModel { nonprojective, inclusion, presentation: pres, tau, tau_inclusion }
    }

    /// `C(L, ΣM)` with its basis.
    pub fn shift_space(&self, l: &ClusterObject<F>, m: &ClusterObject<F>) -> ShiftSpace<F> {
        let ext = Ext1Space::new(&l.module_part, &m.module_part);
        let tau_m = self.tau_model(m);
        let coext = hom_space(&l.module_part, &tau_m.tau);
        let projective_part =
            self.projective_part_dim(&l.key, &m.key, l.module_part.dims(), m.module_part.dims());
        ShiftSpace { ext, tau_m, coext, projective_part }
    }

    /// Whether every class in `C(L, ΣM)` and in `C(M, ΣL)` is pure, with a reason.
    pub fn admissibility(&self, l: &ObjectKey, m: &ObjectKey) -> (bool, String) {
        let (dl, dm) = (self.module_dims(l), self.module_dims(m));
        if self.projective_part_dim(l, m, &dl, &dm) + self.projective_part_dim(m, l, &dm, &dl) > 0 {
            return (false, "nonzero components through shifted projectives".into());
        }
        let (lm, ml) = (self.module_ext_dim(l, m), self.module_ext_dim(m, l));
        if lm > 0 && ml > 0 {
            return (false, format!("mixed classes possible: dim Ext¹(L,M) = {lm}, dim Ext¹(M,L) = {ml}"));
        }
        (true, "all classes pure".into())
    }

    fn sigma_m(&self, m: &ClusterObject<F>, tau_m: &MatrixRep<F>) -> MatrixRep<F> {
        let shifts: Vec<usize> =
            m.shifted_projectives.iter().enumerate().flat_map(|(v, &c)| std::iter::repeat_n(v, c)).collect();
        tau_m.direct_sum(&injective_sum(&self.pa, &shifts))
    }

    fn shifts_of(&self, l: &ClusterObject<F>, m: &ClusterObject<F>) -> Vec<usize> {
        l.shifted_projectives.iter().zip(&m.shifted_projectives).map(|(a, b)| a + b).collect()
    }

    /// The triangle of a pure class `ε ∈ C(L, ΣM)`.
    pub fn middle_term(
        &self,
        l: &ClusterObject<F>,
        m: &ClusterObject<F>,
        space: &ShiftSpace<F>,
        eps: &ExtClass<F>,
    ) -> Result<TriangleData<F>> {
        let f = self.field();
        if !eps.is_pure(f) || ExtClass::nonzero(f, &eps.projective) {
            return Err(Error::MixedClassUnsupported);
        }
        let (fm, fl) = (&m.module_part, &l.module_part);
        let f_sigma_m = self.sigma_m(m, &space.tau_m.tau);
        let zero_delta = ModMap::zero(f, fl.dims(), f_sigma_m.dims());
        let shifts = self.shifts_of(l, m);
        if eps.is_zero(f) {
            let parts: [&[usize]; 2] = [fm.dims(), fl.dims()];
            return Ok(TriangleData {
                y: l.key.sum(&m.key),
                fm: fm.clone(),
                fy: fm.direct_sum(fl),
                fl: fl.clone(),
                f_sigma_m,
                fi: summand_inclusion(f, &parts, 0),
                fp: summand_projection(f, &parts, 1),
                delta: zero_delta,
                eps: eps.clone(),
            });
        }
        if ExtClass::nonzero(f, &eps.ext) {
            let (e, i, p) = space.ext.middle_term(&eps.ext)?;
            return Ok(TriangleData {
                y: self.key_of(&e, &shifts)?,
                fm: fm.clone(),
                fy: e,
                fl: fl.clone(),
                f_sigma_m,
                fi: i,
                fp: p,
                delta: zero_delta,
                eps: eps.clone(),
            });
        }
        let phi = space.coext_map(&eps.coext);
        let tm = &space.tau_m;
        let (ker, ker_incl) = kernel_module(fl, &phi);
        let (coker, q) = naive_cokernel(&tm.tau, &phi);
        let (tau_inv_n, kernel) = self.tau_inverse_of_quotient(tm, &coker, &q)?;
        // K ⊆ M' ⊆ M, and FY = M/K ⊕ ker φ
        let k_in_m: Vec<ExactMatrix<F>> =
            tm.inclusion.blocks.iter().zip(&kernel).map(|(i, k)| i.mul(k)).collect();
        let (quot, proj) = quotient_module(fm, &k_in_m);
        let (quot_np, _) = quotient_module(&tm.nonprojective, &kernel);
        if self.catalog.decompose(&quot_np)? != self.catalog.decompose(&tau_inv_n)? {
            return Err(Error::ExactnessFailure("M'/K is not isomorphic to τ⁻¹(coker φ)".into()));
        }
        let fy = quot.direct_sum(&ker);
        let parts: [&[usize]; 2] = [quot.dims(), ker.dims()];
        let fi = summand_inclusion(f, &parts, 0).compose(&proj);
        let fp = ker_incl.compose(&summand_projection(f, &parts, 1));
        let mut y_shifts = shifts;
        for (i, c) in self.catalog.decompose(&coker)?.into_iter().enumerate() {
            if let Some(v) = self.catalog.injective_vertex(i) {
                y_shifts[v] += c;
            }
        }
        let rest: Vec<usize> = f_sigma_m.dims().iter().zip(tm.tau.dims()).map(|(a, b)| a - b).collect();
        let delta = summand_inclusion(f, &[tm.tau.dims(), &rest], 0).compose(&phi);
        Ok(TriangleData {
            y: self.key_of(&fy, &y_shifts)?,
            fm: fm.clone(),
            fy,
            fl: fl.clone(),
            f_sigma_m,
            fi,
            fp,
            delta,
            eps: eps.clone(),
        })
    }

    /// For a quotient `q: τM' -> N`, the module `τ⁻¹N` and the kernel `K` of
    /// the induced surjection `M' = τ⁻¹τM' -> τ⁻¹N`, as column bases in `M'`.
    ///
    /// `q` is lifted to the copresentations `τM' -> νP₁ -> νP₀` (from the
    /// minimal presentation of `M'`) and `N -> I⁰ -> I¹`; applying `ν⁻¹` to
    /// the lift `νP₀ -> I¹` and passing to cokernels gives the map.
    fn tau_inverse_of_quotient(
        &self,
        tm: &TauModel<F>,
        n: &MatrixRep<F>,
        q: &ModMap<F>,
    ) -> Result<(MatrixRep<F>, Vec<ExactMatrix<F>>)> {
        let pa = &self.pa;
        let pres = &tm.presentation;
        let nu_p1 = injective_sum(pa, &pres.second.vertices);
        let nu_p0 = injective_sum(pa, &pres.cover.vertices);
        let nu_d = pres.differential.on_injectives(pa);
        let cop = copresentation(pa, n);
        let d_n = cop.differential.on_injectives(pa);
        let fail = |what: &str| Error::ExactnessFailure(format!("cannot lift {what} through injectives"));
        let u0 = extend_along(&nu_p1, &cop.envelope.module, &tm.tau_inclusion, &cop.envelope.map.compose(q))
            .ok_or_else(|| fail("the quotient map"))?;
        let u1 = extend_along(&nu_p0, &cop.second.module, &nu_d, &d_n.compose(&u0)).ok_or_else(|| fail("the second component"))?;
        let w = PathMatrix::from_injective_map(pa, &pres.cover.vertices, &cop.second.vertices, &u1).on_projectives(pa);
        let (tau_inv, pi_n) = tau_inverse_from(pa, &cop);
        let h = pi_n.compose(&w);
        let kernel = h
            .blocks
            .iter()
            .zip(&pres.cover.map.blocks)
            .map(|(hb, pb)| pb.mul(&hb.kernel_matrix()).column_space())
            .collect();
        Ok((tau_inv, kernel))
    }

    /// Duality pairing between `C(L, ΣM)` and `C(M, ΣL)`, made explicit by
    /// composing into an `Ext¹` space and choosing the first coordinate
    /// functional (by subset size, then lexicographically) of full rank.
    pub fn serre_pairing(&self, l: &ClusterObject<F>, m: &ClusterObject<F>) -> Result<SerrePairing<F>> {
        let f = self.field();
        let lm = self.shift_space(l, m);
        let ml = self.shift_space(m, l);
        if lm.dim() != ml.dim() {
            return Err(Error::DegeneratePairing);
        }
        if lm.dim() == 0 {
            return Ok(SerrePairing { matrix: ExactMatrix::zeros(f.clone(), 0, 0), functional: Vec::new() });
        }
        if lm.projective_part + ml.projective_part > 0 {
            return Err(Error::MixedClassUnsupported);
        }
        let d = lm.dim();
        let unit = |k: usize, n: usize| {
            let mut c = vec![f.zero(); n];
            c[k] = f.one();
            c
        };
        // values[a][b] = coordinates of the composite of basis elements
        let values: Vec<Vec<Vec<F::Elem>>> = if lm.ext.dim() == d && ml.coext.len() == d {
            let target = Ext1Space::new(&l.module_part, &ml.tau_m.tau);
            (0..d)
                .map(|a| (0..d).map(|b| lm.ext.pushout(&unit(a, d), &ml.coext[b], &target)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?
        } else if lm.coext.len() == d && ml.ext.dim() == d {
            let target = Ext1Space::new(&m.module_part, &lm.tau_m.tau);
            (0..d)
                .map(|a| (0..d).map(|b| ml.ext.pushout(&unit(b, d), &lm.coext[a], &target)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?
        } else {
            return Err(Error::MixedClassUnsupported);
        };
        let width = values[0][0].len();
        for functional in functional_candidates(width) {
            let rows: Vec<Vec<F::Elem>> = values
                .iter()
                .map(|row| row.iter().map(|v| functional.iter().fold(f.zero(), |acc, &k| f.add(&acc, &v[k]))).collect())
                .collect();
            let matrix = ExactMatrix::from_rows(f.clone(), d, rows)?;
            if matrix.rank() == d {
                return Ok(SerrePairing { matrix, functional });
            }
        }
        Err(Error::DegeneratePairing)
    }
}
