//! The complete cohomology ring `Ê*(M, M)` in two models.
//!
//! * [`TateRing`]: cochains on the minimal complete resolution `P(M)` with values in `M`.
//!   Classes have canonical coordinates and products are compositions with lifted chain maps.
//! * [`EndModel`]: cochains on the labeled resolution `P(k)` with values in `End_k(M)`, where
//!   cohomology elements of the group act by composing with their chain maps on `P(k)`.
//!
//! [`Comparison`] converts between them through `P(k) ⊗ M`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, ModuleRep};
use crate::cochain::{compose_cochain, lift_cocycle, ChainMap, Cohomology};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::resolution::{complete_resolution, tensor_with_module, trivial_module_resolution, Complex};

/// An element of `Ê^degree` in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Class {
    pub degree: i64,
    pub coords: Vec<u8>,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn basis(degree: i64, dim: usize, i: usize) -> Class {
        let mut coords = vec![0u8; dim];
        coords[i] = 1;
        Class { degree, coords }
    }
}

type LiftCache = Mutex<HashMap<(i64, Vec<u8>), Arc<ChainMap>>>;

/// `Ê*(M, M)` from the minimal complete resolution of `M`.
pub struct TateRing {
    module: ModuleRep,
    coh: Cohomology,
    lifts: LiftCache,
}

impl std::fmt::Debug for TateRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TateRing({:?})", self.coh.complex())
    }
}

impl TateRing {
    pub fn new(m: &ModuleRep, n_min: i64, n_max: i64) -> Result<Self> {
        Self::from_complex(Arc::new(complete_resolution(m, n_min, n_max)?))
    }

    pub fn from_complex(res: Arc<Complex>) -> Result<Self> {
        let module = res.module().clone();
        let coh = Cohomology::new(res, module.clone())?;
        Ok(TateRing { module, coh, lifts: Mutex::new(HashMap::new()) })
    }

    pub fn module(&self) -> &ModuleRep {
        &self.module
    }
    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        self.module.algebra()
    }
    pub fn complex(&self) -> &Arc<Complex> {
        self.coh.complex()
    }
    pub fn cohomology(&self) -> &Cohomology {
        &self.coh
    }
    /// Degrees whose groups `Ê^n` are computable.
    pub fn degree_range(&self) -> (i64, i64) {
        self.coh.degree_range()
    }

    pub fn dim(&self, n: i64) -> Result<usize> {
        self.coh.dim(n)
    }

    pub fn zero(&self, n: i64) -> Result<Class> {
        Ok(Class { degree: n, coords: vec![0; self.dim(n)?] })
    }

    pub fn basis(&self, n: i64) -> Result<Vec<Class>> {
        let d = self.dim(n)?;
        Ok((0..d).map(|i| Class::basis(n, d, i)).collect())
    }

    pub fn class_of(&self, n: i64, cocycle: &[u8]) -> Result<Class> {
        Ok(Class { degree: n, coords: self.coh.class_coords(n, cocycle)? })
    }

    pub fn cocycle(&self, a: &Class) -> Result<Vec<u8>> {
        self.coh.representative(a.degree, &a.coords)
    }

    /// The class of the identity: the augmentation as a degree-0 cocycle.
    pub fn identity(&self) -> Result<Class> {
        let res = self.complex();
        let d = self.algebra().dim();
        let eps: Vec<u8> = (0..res.rank(0)).flat_map(|g| res.augmentation().col(g * d)).collect();
        self.class_of(0, &eps)
    }

    /// Source degrees on which a chain map of the given shift fits in the window.
    pub fn lift_range(&self, shift: i64) -> (i64, i64) {
        let res = self.complex();
        (res.n_min().max(res.n_min() + shift), res.n_max().min(res.n_max() + shift))
    }

    /// The chain map lifting the canonical cocycle of `b`, over the largest range the window allows.
    pub fn lift(&self, b: &Class) -> Result<Arc<ChainMap>> {
        let key = (b.degree, b.coords.clone());
        if let Some(l) = self.lifts.lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        let (lo, hi) = self.lift_range(b.degree);
        let res = self.complex();
        let rep = self.cocycle(b)?;
        let lift = Arc::new(lift_cocycle(res, res, b.degree, &rep, lo, hi)?);
        self.lifts.lock().unwrap().insert(key, lift.clone());
        Ok(lift)
    }

    /// `a · b`, the class of `a ∘ b̃`.
    pub fn multiply(&self, a: &Class, b: &Class) -> Result<Class> {
        let n = a.degree + b.degree;
        self.coh.space(n)?;
        if a.is_zero() || b.is_zero() {
            return self.zero(n);
        }
        let lift = self.lift(b)?;
        let psi = lift.component(n)?;
        let rep = self.cocycle(a)?;
        let prod = compose_cochain(self.algebra(), &self.module, &rep, psi);
        self.class_of(n, &prod)
    }

    /// The product of two arbitrary cocycle representatives: `a ∘ b̃` with `b̃` lifted from
    /// `b` itself rather than from the canonical representative of its class.
    pub fn multiply_cocycles(&self, m: i64, a: &[u8], n: i64, b: &[u8]) -> Result<Class> {
        let deg = m + n;
        self.coh.space(deg)?;
        if !self.coh.is_cocycle(m, a)? {
            return Err(Error::NotACocycle(m));
        }
        if !self.coh.is_cocycle(n, b)? {
            return Err(Error::NotACocycle(n));
        }
        let (lo, hi) = self.lift_range(n);
        let res = self.complex();
        let lift = lift_cocycle(res, res, n, b, lo, hi)?;
        let prod = compose_cochain(self.algebra(), &self.module, a, lift.component(deg)?);
        self.class_of(deg, &prod)
    }

    /// Matrix of `x -> x · b` from `Ê^n` to `Ê^{n + deg b}` (columns are images of basis classes).
    pub fn right_multiplication(&self, b: &Class, n: i64) -> Result<Mat> {
        let target = n + b.degree;
        let rows = self.dim(target)?;
        let f = self.algebra().field();
        let basis = self.basis(n)?;
        if b.is_zero() || basis.is_empty() {
            return Ok(Mat::zeros(f, rows, basis.len()));
        }
        let cols: Result<Vec<Vec<u8>>> = basis.iter().map(|x| Ok(self.multiply(x, b)?.coords)).collect();
        Ok(Mat::from_cols(f, rows, &cols?))
    }

    /// Matrix of `x -> a · x` from `Ê^n` to `Ê^{deg a + n}`.
    pub fn left_multiplication(&self, a: &Class, n: i64) -> Result<Mat> {
        let target = n + a.degree;
        let rows = self.dim(target)?;
        let f = self.algebra().field();
        let basis = self.basis(n)?;
        let cols: Result<Vec<Vec<u8>>> = basis.iter().map(|x| Ok(self.multiply(a, x)?.coords)).collect();
        Ok(Mat::from_cols(f, rows, &cols?))
    }

    pub fn add(&self, a: &Class, b: &Class) -> Class {
        assert_eq!(a.degree, b.degree);
        let f = self.algebra().field();
        Class { degree: a.degree, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| f.add(*x, *y)).collect() }
    }

    pub fn scale(&self, a: &Class, c: u8) -> Class {
        let f = self.algebra().field();
        Class { degree: a.degree, coords: a.coords.iter().map(|x| f.mul(*x, c)).collect() }
    }
}

/// Cochains on the labeled resolution of `k` with values in `End_k(M)`.
pub struct EndModel {
    module: ModuleRep,
    end: ModuleRep,
    trivial: ModuleRep,
    coh: Cohomology,
    kcoh: Cohomology,
}

impl std::fmt::Debug for EndModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EndModel({:?})", self.coh.complex())
    }
}

impl EndModel {
    pub fn new(m: &ModuleRep, n_min: i64, n_max: i64) -> Result<Self> {
        let pk = Arc::new(trivial_module_resolution(m.algebra(), n_min, n_max));
        let end = m.hom_k(m)?;
        let trivial = ModuleRep::trivial(m.algebra());
        Ok(EndModel {
            module: m.clone(),
            coh: Cohomology::new(pk.clone(), end.clone())?,
            kcoh: Cohomology::new(pk, trivial.clone())?,
            end,
            trivial,
        })
    }

    pub fn module(&self) -> &ModuleRep {
        &self.module
    }
    pub fn end(&self) -> &ModuleRep {
        &self.end
    }
    pub fn complex(&self) -> &Arc<Complex> {
        self.coh.complex()
    }
    pub fn cohomology(&self) -> &Cohomology {
        &self.coh
    }
    /// Cohomology of the group with trivial coefficients, on the same resolution.
    pub fn group_cohomology(&self) -> &Cohomology {
        &self.kcoh
    }

    fn end_dim(&self) -> usize {
        self.end.dim()
    }

    /// The cochain taking the labeled generator `label` of `P_n` to `value` and all others to 0.
    pub fn cochain(&self, n: i64, values: &[(&[i64], &Mat)]) -> Result<Vec<u8>> {
        let res = self.complex();
        res.check_degree(n)?;
        let de = self.end_dim();
        let mut c = vec![0u8; res.rank(n) * de];
        for (label, f) in values {
            let g = res
                .generator_index(n, label)
                .ok_or_else(|| Error::DegreeMismatch(format!("no generator {label:?} in degree {n}")))?;
            if f.rows() * f.cols() != de {
                return Err(Error::DimensionMismatch { expected: de, found: f.rows() * f.cols() });
            }
            c[g * de..(g + 1) * de].copy_from_slice(f.data());
        }
        Ok(c)
    }

    /// The value of a cochain on generator `g`, as a matrix.
    pub fn value(&self, c: &[u8], g: usize) -> Mat {
        let de = self.end_dim();
        let n = self.module.dim();
        Mat::from_data(self.module.field(), n, n, c[g * de..(g + 1) * de].to_vec())
    }

    /// A group cohomology cocycle taking the listed generators to 1.
    pub fn group_cochain(&self, n: i64, labels: &[&[i64]]) -> Result<Vec<u8>> {
        let res = self.complex();
        res.check_degree(n)?;
        let mut c = vec![0u8; res.rank(n)];
        for label in labels {
            let g = res
                .generator_index(n, label)
                .ok_or_else(|| Error::DegreeMismatch(format!("no generator {label:?} in degree {n}")))?;
            c[g] = 1;
        }
        Ok(c)
    }

    /// The chain map on `P(k)` lifting a group cohomology cocycle of degree `s`, over the
    /// largest range the window allows.
    pub fn lift_group_cocycle(&self, s: i64, zeta: &[u8]) -> Result<ChainMap> {
        let res = self.complex();
        let lo = res.n_min().max(res.n_min() + s);
        let hi = res.n_max().min(res.n_max() + s);
        lift_cocycle(res, res, s, zeta, lo, hi)
    }

    /// `α ∘ ζ_{n+s}` for an End-valued cochain `α` of degree `n` and a chain map `ζ` of shift `s`.
    pub fn act(&self, alpha: &[u8], n: i64, zeta: &ChainMap) -> Result<Vec<u8>> {
        let psi = zeta.component(n + zeta.shift)?;
        Ok(compose_cochain(self.complex().algebra(), &self.end, alpha, psi))
    }

    /// `ζ ⊗ Id_M` as an End-valued cochain.
    pub fn scalar_cochain(&self, zeta: &[u8]) -> Vec<u8> {
        let n = self.module.dim();
        let id = Mat::identity(self.module.field(), n);
        let de = self.end_dim();
        let mut c = vec![0u8; zeta.len() * de];
        for (g, &z) in zeta.iter().enumerate() {
            if z != 0 {
                c[g * de..(g + 1) * de].copy_from_slice(id.scaled(z).data());
            }
        }
        c
    }

    pub fn trivial(&self) -> &ModuleRep {
        &self.trivial
    }
}

/// Comparison chain maps `φ : P(M) -> P(k) ⊗ M` and `ψ : P(k) ⊗ M -> P(M)` lifting the
/// identity of `M`, used to move cocycles between the two models.
pub struct Comparison {
    q: Arc<Complex>,
    phi: ChainMap,
    psi: ChainMap,
    dim_m: usize,
}

impl Comparison {
    pub fn new(ring: &TateRing, model: &EndModel) -> Result<Self> {
        let pm = ring.complex();
        let pk = model.complex();
        let q = Arc::new(tensor_with_module(pk, ring.module())?);
        let lo = pm.n_min().max(q.n_min());
        let hi = pm.n_max().min(q.n_max());
        let d = ring.algebra().dim();
        let eps_p: Vec<u8> = (0..pm.rank(0)).flat_map(|g| pm.augmentation().col(g * d)).collect();
        let eps_q: Vec<u8> = (0..q.rank(0)).flat_map(|g| q.augmentation().col(g * d)).collect();
        let phi = lift_cocycle(pm, &q, 0, &eps_p, lo, hi)?;
        let psi = lift_cocycle(&q, pm, 0, &eps_q, lo, hi)?;
        Ok(Comparison { q, phi, psi, dim_m: ring.module().dim() })
    }

    pub fn tensor_complex(&self) -> &Arc<Complex> {
        &self.q
    }
    pub fn phi(&self) -> &ChainMap {
        &self.phi
    }
    pub fn psi(&self) -> &ChainMap {
        &self.psi
    }

    /// End-valued cochain on `P_n(k)` to the `P(M)` model.
    pub fn end_to_ring(&self, ring: &TateRing, n: i64, c: &[u8]) -> Result<Class> {
        let dm = self.dim_m;
        let de = dm * dm;
        let rank = c.len() / de;
        // adjoint: c♭(u_g ⊗ m_i) = c(u_g)(m_i)
        let mut flat = vec![0u8; rank * dm * dm];
        for g in 0..rank {
            for i in 0..dm {
                for j in 0..dm {
                    flat[(g * dm + i) * dm + j] = c[g * de + j * dm + i];
                }
            }
        }
        let cocycle = compose_cochain(ring.algebra(), ring.module(), &flat, self.phi.component(n)?);
        ring.class_of(n, &cocycle)
    }

    /// `P(M)` class to an End-valued cocycle on `P_n(k)`.
    pub fn ring_to_end(&self, ring: &TateRing, a: &Class) -> Result<Vec<u8>> {
        let dm = self.dim_m;
        let de = dm * dm;
        let rep = ring.cocycle(a)?;
        let flat = compose_cochain(ring.algebra(), ring.module(), &rep, self.psi.component(a.degree)?);
        let rank = flat.len() / de;
        let mut c = vec![0u8; rank * de];
        for g in 0..rank {
            for i in 0..dm {
                for j in 0..dm {
                    c[g * de + j * dm + i] = flat[(g * dm + i) * dm + j];
                }
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn identity_is_unit() {
        let m = corpus::periodic_module();
        let ring = TateRing::new(&m, -4, 4).unwrap();
        let id = ring.identity().unwrap();
        assert!(!id.is_zero());
        for n in -2..=2 {
            for b in ring.basis(n).unwrap() {
                assert_eq!(ring.multiply(&id, &b).unwrap(), b);
                assert_eq!(ring.multiply(&b, &id).unwrap(), b);
            }
        }
    }

    #[test]
    fn models_agree_in_dimension() {
        let m = corpus::periodic_module();
        let ring = TateRing::new(&m, -4, 4).unwrap();
        let model = EndModel::new(&m, -4, 4).unwrap();
        for n in -3..=3 {
            assert_eq!(ring.dim(n).unwrap(), model.cohomology().dim(n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn conversion_round_trip() {
        let m = corpus::growth_module();
        let ring = TateRing::new(&m, -4, 4).unwrap();
        let model = EndModel::new(&m, -4, 4).unwrap();
        let cmp = Comparison::new(&ring, &model).unwrap();
        for n in -3..=3 {
            for b in ring.basis(n).unwrap() {
                let c = cmp.ring_to_end(&ring, &b).unwrap();
                assert!(model.cohomology().is_cocycle(n, &c).unwrap());
                assert_eq!(cmp.end_to_ring(&ring, n, &c).unwrap(), b, "degree {n}");
            }
        }
    }

    #[test]
    fn identity_converts_to_identity_cocycle() {
        let m = corpus::periodic_module();
        let ring = TateRing::new(&m, -3, 3).unwrap();
        let model = EndModel::new(&m, -3, 3).unwrap();
        let cmp = Comparison::new(&ring, &model).unwrap();
        let id = Mat::identity(m.field(), m.dim());
        let c = model.cochain(0, &[(&[0, 0, 0], &id)]).unwrap();
        assert_eq!(cmp.end_to_ring(&ring, 0, &c).unwrap(), ring.identity().unwrap());
    }
}
