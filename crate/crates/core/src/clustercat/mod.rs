//! The cluster category of a representation-finite acyclic quiver, with the
//! cluster-tilting object `T = ⊕ P_i`.
//!
//! Every indecomposable object is a module or a shifted projective `ΣP_i`,
//! and `F = C(T, −)` sends a module to itself and `ΣP_i` to zero. Morphism
//! spaces come from the orbit-category decomposition:
//!
//! ```text
//! C(X, ΣY)     = Ext¹(X, Y) ⊕ Hom(X, τY)      X, Y modules
//! C(ΣP_i, ΣY)  = Hom(P_i, Y) = Y_i
//! C(X, Σ²P_j)  = D C(ΣP_j, ΣX) = X_j
//! C(ΣP_i, Σ²P_j) = 0
//! ```
//!
//! and `C(X, Y) = C(τX, ΣY)` with `τP_i = ΣP_i`, `τΣP_i = I_i`.

mod triangle;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{Field, LaurentPoly, Rationals};
use crate::grasseuler::{chi_quiver_grassmannian, sub_dimension_vectors, Sampling};
use crate::quiverrep::catalog::{IndecCatalog, DEFAULT_DIM_CAP};
use crate::quiverrep::ext::Ext1Space;
use crate::quiverrep::hom::hom_dim as module_hom_dim;
use crate::quiverrep::translate::{coindex_vector, index_vector, tau};
use crate::quiverrep::{Algebra, MatrixRep, PathAlgebra, Quiver};

pub use triangle::{f_image_sequence, ExtClass, FImageSequence, SerrePairing, ShiftSpace, TauModel, TriangleData};

/// Coordinates `Σ a_i [P_i]` in `K₀(add T)`.
pub type K0ProjClass = Vec<i64>;

/// Field-independent description of an object: multiplicity of each catalog
/// indecomposable and of each shifted projective `ΣP_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectKey {
    pub summands: Vec<usize>,
    pub shifts: Vec<usize>,
}

impl ObjectKey {
    pub fn zero(catalog_len: usize, n: usize) -> Self {
        ObjectKey { summands: vec![0; catalog_len], shifts: vec![0; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.iter().chain(&self.shifts).all(|&c| c == 0)
    }

    pub fn sum(&self, other: &Self) -> Self {
        ObjectKey {
            summands: self.summands.iter().zip(&other.summands).map(|(a, b)| a + b).collect(),
            shifts: self.shifts.iter().zip(&other.shifts).map(|(a, b)| a + b).collect(),
        }
    }

    /// Number of indecomposable summands, with multiplicity.
    pub fn len(&self) -> usize {
        self.summands.iter().chain(&self.shifts).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// An object `M ⊕ ⊕ ΣP_v^{shifts[v]}`. The module part is kept as the direct
/// sum of catalog modules in catalog order, so summands are coordinate blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterObject<F: Field> {
    pub module_part: MatrixRep<F>,
    pub shifted_projectives: Vec<usize>,
    pub key: ObjectKey,
}

impl<F: Field> ClusterObject<F> {
    /// Catalog index of each module summand copy, in block order.
    pub fn copies(&self) -> Vec<usize> {
        self.key.summands.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect()
    }
}

/// `⟨e, f⟩ = Σ e_i f_i − Σ_{a: i -> j} e_i f_j`.
pub fn euler_form(q: &Quiver, e: &[i64], f: &[i64]) -> i64 {
    let diag: i64 = e.iter().zip(f).map(|(a, b)| a * b).sum();
    diag - q.arrows().iter().map(|a| e[a.source] * f[a.target]).sum::<i64>()
}

/// `⟨e, f⟩_a = ⟨e, f⟩ − ⟨f, e⟩`.
pub fn antisym_form(q: &Quiver, e: &[i64], f: &[i64]) -> i64 {
    euler_form(q, e, f) - euler_form(q, f, e)
}

/// `Σ_i ⟨S_i, e⟩_a [P_i]`.
pub fn antisym_vector(q: &Quiver, e: &[i64]) -> Vec<i64> {
    (0..q.n_vertices())
        .map(|i| {
            let mut s = vec![0; q.n_vertices()];
            s[i] = 1;
            antisym_form(q, &s, e)
        })
        .collect()
}

/// Parse `T1 + k*T2 + ...`; `0` is the zero object.
pub fn parse_sum(text: &str, zero: ObjectKey, term: impl Fn(&str) -> Option<ObjectKey>) -> Option<ObjectKey> {
    let text = text.trim();
    if text == "0" {
        return Some(zero);
    }
    let mut out = zero;
    for part in text.split('+') {
        let part = part.trim();
        let (k, name) = match part.split_once('*') {
            Some((k, rest)) => (k.trim().parse::<usize>().ok()?, rest.trim()),
            None => (1, part),
        };
        let key = term(name)?;
        for _ in 0..k {
            out = out.sum(&key);
        }
    }
    Some(out)
}

pub(crate) fn as_i64(v: &[usize]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

/// Bilinear data on catalog indecomposables.
#[derive(Clone, Debug)]
struct Tables {
    index: Vec<Vec<i64>>,
    coindex: Vec<Vec<i64>>,
    /// `ext1[i][j] = dim Ext¹(M_i, M_j)`.
    ext1: Vec<Vec<usize>>,
    /// `hom_tau[i][j] = dim Hom(M_i, τM_j)`.
    hom_tau: Vec<Vec<usize>>,
    /// `τM_i` as an object.
    tau: Vec<ObjectKey>,
}

/// The cluster category over one field.
#[derive(Debug)]
pub struct ClusterCategory<F: Field> {
    pa: PathAlgebra<F>,
    catalog: IndecCatalog<F>,
    tables: Tables,
    sampling: Sampling,
    characters: Mutex<HashMap<ObjectKey, LaurentPoly>>,
}

impl<F: Field> ClusterCategory<F> {
    pub fn new(algebra: Arc<Algebra>, field: F, dim_cap: usize, sampling: Sampling) -> Result<Self> {
        if !algebra.is_hereditary() || !algebra.quiver().is_acyclic() {
            return Err(Error::InvalidInput("cluster categories need an acyclic quiver without relations".into()));
        }
        let pa = PathAlgebra::new(algebra, field)?;
        let catalog = IndecCatalog::build(&pa, dim_cap)?;
        let n = pa.n();
        let len = catalog.len();
        let mods = catalog.modules();
        let index = mods.iter().map(|m| index_vector(&pa, m)).collect();
        let coindex = mods.iter().map(|m| coindex_vector(&pa, m)).collect();
        let ext1 = mods.iter().map(|a| mods.iter().map(|b| Ext1Space::new(a, b).dim()).collect()).collect();
        let taus: Vec<MatrixRep<F>> = mods.iter().map(|m| tau(&pa, m)).collect();
        let hom_tau = mods.iter().map(|a| taus.iter().map(|t| module_hom_dim(a, t)).collect()).collect();
        let tau_keys = (0..len)
            .map(|i| {
                let mut k = ObjectKey::zero(len, n);
                match catalog.projective_vertex(i) {
                    Some(v) => k.shifts[v] = 1,
                    None => k.summands = catalog.decompose(&taus[i])?,
                }
                Ok(k)
            })
            .collect::<Result<Vec<_>>>()?;
        let tables = Tables { index, coindex, ext1, hom_tau, tau: tau_keys };
        Ok(ClusterCategory { pa, catalog, tables, sampling, characters: Mutex::new(HashMap::new()) })
    }

    pub fn with_defaults(algebra: Arc<Algebra>, field: F) -> Result<Self> {
        Self::new(algebra, field, DEFAULT_DIM_CAP, Sampling::default())
    }

    pub fn path_algebra(&self) -> &PathAlgebra<F> {
        &self.pa
    }

    pub fn catalog(&self) -> &IndecCatalog<F> {
        &self.catalog
    }

    pub fn field(&self) -> &F {
        self.pa.field()
    }

    pub fn quiver(&self) -> &Quiver {
        self.pa.algebra().quiver()
    }

    pub fn n(&self) -> usize {
        self.pa.n()
    }

    pub fn sampling(&self) -> &Sampling {
        &self.sampling
    }

    pub fn zero_key(&self) -> ObjectKey {
        ObjectKey::zero(self.catalog.len(), self.n())
    }

    /// Key of a single catalog indecomposable.
    pub fn indecomposable_key(&self, i: usize) -> ObjectKey {
        let mut k = self.zero_key();
        k.summands[i] = 1;
        k
    }

    /// Key of `ΣP_v`.
    pub fn shift_key(&self, v: usize) -> ObjectKey {
        let mut k = self.zero_key();
        k.shifts[v] = 1;
        k
    }

    fn check_key(&self, key: &ObjectKey) -> Result<()> {
        if key.summands.len() != self.catalog.len() || key.shifts.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "object key has {} summand slots and {} shift slots, expected {} and {}",
                key.summands.len(),
                key.shifts.len(),
                self.catalog.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// The canonical object with the given key.
    pub fn object(&self, key: &ObjectKey) -> Result<ClusterObject<F>> {
        self.check_key(key)?;
        let parts: Vec<&MatrixRep<F>> = key
            .summands
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(self.catalog.module(i), c))
            .collect();
        let module_part = MatrixRep::direct_sum_all(self.pa.algebra().clone(), self.field().clone(), parts);
        Ok(ClusterObject { module_part, shifted_projectives: key.shifts.clone(), key: key.clone() })
    }

    /// Key of `m ⊕ ⊕ ΣP_v^{shifts[v]}` for an arbitrary module `m`.
    pub fn key_of(&self, m: &MatrixRep<F>, shifts: &[usize]) -> Result<ObjectKey> {
        Ok(ObjectKey { summands: self.catalog.decompose(m)?, shifts: shifts.to_vec() })
    }

    /// Render a key as `P1 + 2*S2 + shift P1`; `0` when empty.
    pub fn render(&self, key: &ObjectKey) -> String {
        let mut parts: Vec<String> = Vec::new();
        if key.summands.iter().any(|&c| c > 0) {
            parts.push(self.catalog.render(&key.summands));
        }
        for (v, &c) in key.shifts.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("shift P{}", v + 1)),
                _ => parts.push(format!("{c}*shift P{}", v + 1)),
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Resolve a name: a catalog indecomposable (`S1`, `P2`, `M111`) or a
    /// shifted projective (`shift P1`).
    /// Sums such as `S1 + 2*P2 + shift P1` are accepted.
    pub fn key_by_name(&self, name: &str) -> Option<ObjectKey> {
        parse_sum(name, self.zero_key(), |term| {
            if let Some(rest) = term.strip_prefix("shift") {
                let v: usize = rest.trim().strip_prefix('P')?.parse().ok()?;
                return (1..=self.n()).contains(&v).then(|| self.shift_key(v - 1));
            }
            self.catalog.position(term).map(|i| self.indecomposable_key(i))
        })
    }

    /// `τ` in the cluster category, on keys.
    pub fn tau_key(&self, key: &ObjectKey) -> ObjectKey {
        let mut out = self.zero_key();
        for (i, &c) in key.summands.iter().enumerate() {
            for _ in 0..c {
                out = out.sum(&self.tables.tau[i]);
            }
        }
        for (v, &c) in key.shifts.iter().enumerate() {
            out.summands[self.catalog.injective_index(v)] += c;
        }
        out
    }

    /// `dim C(x, Σ^shift y)` for `shift ∈ {0, 1}`.
    pub fn hom_dim(&self, x: &ObjectKey, y: &ObjectKey, shift: u8) -> usize {
        match shift {
            0 => self.hom_dim(&self.tau_key(x), y, 1),
            1 => {
                let t = &self.tables;
                let mut d = 0;
                let dx = self.module_dims(x);
                let dy = self.module_dims(y);
                for (i, &a) in x.summands.iter().enumerate() {
                    for (j, &b) in y.summands.iter().enumerate() {
                        d += a * b * (t.ext1[i][j] + t.hom_tau[i][j]);
                    }
                }
                d + self.projective_part_dim(x, y, &dx, &dy)
            }
            _ => panic!("shift must be 0 or 1"),
        }
    }

    /// Dimension of the components `C(ΣP, ΣY)` and `C(X, Σ²P)` of `C(x, Σy)`.
    pub(crate) fn projective_part_dim(&self, x: &ObjectKey, y: &ObjectKey, dx: &[usize], dy: &[usize]) -> usize {
        (0..self.n()).map(|v| x.shifts[v] * dy[v] + y.shifts[v] * dx[v]).sum()
    }

    /// Dimension vector of the module part.
    pub fn module_dims(&self, key: &ObjectKey) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for (i, &c) in key.summands.iter().enumerate() {
            for (a, b) in d.iter_mut().zip(self.catalog.module(i).dims()) {
                *a += c * b;
            }
        }
        d
    }

    /// Sum of `dim Ext¹` between the module parts, in the given order.
    pub fn module_ext_dim(&self, x: &ObjectKey, y: &ObjectKey) -> usize {
        let mut d = 0;
        for (i, &a) in x.summands.iter().enumerate() {
            for (j, &b) in y.summands.iter().enumerate() {
                d += a * b * self.tables.ext1[i][j];
            }
        }
        d
    }

    fn additive(&self, key: &ObjectKey, table: &[Vec<i64>]) -> K0ProjClass {
        let mut out = vec![0i64; self.n()];
        for (i, &c) in key.summands.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(&table[i]) {
                *o += c as i64 * x;
            }
        }
        for (o, &c) in out.iter_mut().zip(&key.shifts) {
            *o -= c as i64;
        }
        out
    }

    /// `[P₀] − [P₁]` on modules, `−[P_i]` on `ΣP_i`, additive.
    pub fn index(&self, key: &ObjectKey) -> K0ProjClass {
        self.additive(key, &self.tables.index)
    }

    /// `[ν⁻¹I⁰] − [ν⁻¹I¹]` on modules, `−[P_i]` on `ΣP_i`, additive.
    pub fn coindex(&self, key: &ObjectKey) -> K0ProjClass {
        self.additive(key, &self.tables.coindex)
    }

    /// `coindex` recomputed from a copresentation of the whole module part
    /// rather than from the per-summand table.
    pub fn coindex_direct(&self, obj: &ClusterObject<F>) -> K0ProjClass {
        let mut c = coindex_vector(&self.pa, &obj.module_part);
        for (o, &s) in c.iter_mut().zip(&obj.shifted_projectives) {
            *o -= s as i64;
        }
        c
    }

    pub fn antisym_form(&self, e: &[i64], f: &[i64]) -> i64 {
        antisym_form(self.quiver(), e, f)
    }
}

impl ClusterCategory<Rationals> {
    /// `X_M = x^{−coind M} Σ_e χ(Gr_e FM) ∏ x_i^{⟨S_i, e⟩_a}`, evaluated
    /// directly on the whole module part.
    pub fn compute_character(&self, obj: &ClusterObject<Rationals>) -> Result<LaurentPoly> {
        let q = self.quiver();
        let n = self.n();
        let fm = &obj.module_part;
        let shift: Vec<i64> = self.coindex(&obj.key).iter().map(|c| -c).collect();
        let terms = sub_dimension_vectors(fm.dims())
            .into_par_iter()
            .map(|e| {
                let chi = chi_quiver_grassmannian(fm, &e, &self.sampling)?;
                Ok((antisym_vector(q, &as_i64(&e)), chi))
            })
            .collect::<Result<Vec<(Vec<i64>, BigInt)>>>()?;
        let mut x = LaurentPoly::zero(n);
        for (exps, chi) in terms {
            x.add_term(exps, chi);
        }
        Ok(x.shift(&shift))
    }

    /// Cached character of the canonical object with this key.
    pub fn character(&self, key: &ObjectKey) -> Result<LaurentPoly> {
        if let Some(x) = self.characters.lock().expect("cache lock").get(key) {
            return Ok(x.clone());
        }
        let x = self.compute_character(&self.object(key)?)?;
        self.characters.lock().expect("cache lock").insert(key.clone(), x.clone());
        Ok(x)
    }

    /// `χ(Gr_e FM)` for every `e ≤ dim FM`, in lexicographic order of `e`.
    pub fn chi_profile(&self, key: &ObjectKey) -> Result<Vec<(Vec<usize>, BigInt)>> {
        let obj = self.object(key)?;
        sub_dimension_vectors(obj.module_part.dims())
            .into_par_iter()
            .map(|e| Ok((e.clone(), chi_quiver_grassmannian(&obj.module_part, &e, &self.sampling)?)))
            .collect()
    }
}
