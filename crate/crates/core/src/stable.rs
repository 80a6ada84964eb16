//! Module homomorphisms, maps factoring through projectives, and the stable quotient.
//!
//! A map `F : A -> B` is stored as the flattened `dim B x dim A` matrix, entry `F[i][j]` at
//! index `i * dim A + j` (the same coordinates as `ModuleRep::hom_k`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::ModuleRep;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Mat, QuotientCoords, Solver, Subspace};
use crate::resolution::{projective_cover, Complex};

pub fn flatten(f: &Mat) -> Vec<u8> {
    f.data().to_vec()
}

pub fn unflatten(v: &[u8], rows: usize, cols: usize, field: crate::linalg::Fp) -> Mat {
    Mat::from_data(field, rows, cols, v.to_vec())
}

/// `Hom_Λ(source, target)`, optionally with its stable quotient.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: ModuleRep,
    target: ModuleRep,
    span: Subspace,
    stable: Option<(Subspace, QuotientCoords)>,
}

impl HomSpace {
    pub fn source(&self) -> &ModuleRep {
        &self.source
    }
    pub fn target(&self) -> &ModuleRep {
        &self.target
    }
    pub fn span(&self) -> &Subspace {
        &self.span
    }
    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn basis(&self) -> Vec<Mat> {
        self.span.vectors().iter().map(|v| self.to_map(v)).collect()
    }

    pub fn to_map(&self, v: &[u8]) -> Mat {
        unflatten(v, self.target.dim(), self.source.dim(), self.source.field())
    }

    pub fn contains(&self, f: &Mat) -> bool {
        self.span.contains(&flatten(f))
    }

    fn stable_data(&self) -> &(Subspace, QuotientCoords) {
        self.stable.as_ref().expect("stable data not computed; use stable_hom")
    }

    pub fn phom(&self) -> &Subspace {
        &self.stable_data().0
    }

    pub fn stable_dim(&self) -> usize {
        self.stable_data().1.dim()
    }

    /// Canonical coordinates of the stable class of a homomorphism.
    pub fn class_coords(&self, f: &Mat) -> Result<Vec<u8>> {
        let v = flatten(f);
        if !self.span.contains(&v) {
            return Err(Error::Verification("map is not a module homomorphism".into()));
        }
        Ok(self.stable_data().1.coords(&v))
    }

    /// The canonical representative of the class with the given coordinates.
    pub fn representative(&self, coords: &[u8]) -> Mat {
        self.to_map(&self.stable_data().1.lift(coords))
    }

    pub fn is_projectively_trivial(&self, f: &Mat) -> bool {
        self.stable_data().0.contains(&flatten(f))
    }
}

/// Generators of `A` as a module, the cover surjection, and generators of its kernel.
struct PresentationData {
    rank: usize,
    surjection: Mat,
    relations: Vec<Vec<u8>>,
}

fn presentation_of(a: &ModuleRep) -> PresentationData {
    let cover = projective_cover(a);
    let free = ModuleRep::free(a.algebra(), cover.rank);
    let ker = kernel_basis(&cover.surjection);
    let mut rad = Mat::zeros(a.field(), 0, ker.ambient_dim());
    for v in ker.vectors() {
        for act in free.actions() {
            rad.push_row(&act.mul_vec(&v));
        }
    }
    let rad = Subspace::from_rows(&rad);
    let relations = rad.quotient_complement(&ker).expect("radical of a submodule lies in it").vectors();
    PresentationData { rank: cover.rank, surjection: cover.surjection, relations }
}

/// `Hom_Λ(a, b)`: a map is fixed by the images of the generators of `a`, subject to the
/// relations among them.
pub fn hom_module(a: &ModuleRep, b: &ModuleRep) -> Result<HomSpace> {
    if a.algebra() != b.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let f = a.field();
    let alg = a.algebra();
    let d = alg.dim();
    let (da, db) = (a.dim(), b.dim());
    let empty = |span| HomSpace { source: a.clone(), target: b.clone(), span, stable: None };
    if da == 0 || db == 0 {
        return Ok(empty(Subspace::zero(f, da * db)));
    }
    let pres = presentation_of(a);
    let s = pres.rank;
    let mons = b.monomial_actions();
    // one block row per relation: sum_g rel_g . b_g = 0
    let mut eqs = Mat::zeros(f, pres.relations.len() * db, s * db);
    for (k, rel) in pres.relations.iter().enumerate() {
        for g in 0..s {
            let mut act = Mat::zeros(f, db, db);
            for e in 0..d {
                let c = rel[g * d + e];
                if c != 0 {
                    act.add_scaled(&mons[e], c);
                }
            }
            for i in 0..db {
                for j in 0..db {
                    eqs.set(k * db + i, g * db + j, act.get(i, j));
                }
            }
        }
    }
    let sols = kernel_basis(&eqs);
    // a preimage in the free module of every basis vector of `a`
    let pre = Solver::new(&pres.surjection)
        .solve_cols(&Mat::identity(f, da))
        .expect("cover surjection is onto");
    let mut rows = Mat::zeros(f, 0, da * db);
    for sol in sols.vectors() {
        let mut phi = Mat::zeros(f, db, s * d);
        for g in 0..s {
            let bg = &sol[g * db..(g + 1) * db];
            for (e, mon) in mons.iter().enumerate() {
                for (i, &c) in mon.mul_vec(bg).iter().enumerate() {
                    phi.set(i, g * d + e, c);
                }
            }
        }
        rows.push_row(&flatten(&phi.mul(&pre)));
    }
    Ok(empty(Subspace::from_rows(&rows)))
}

/// `Hom_Λ(a, b)` from the intertwining equations `B_i F = F A_i` (reference route).
pub fn hom_by_intertwiners(a: &ModuleRep, b: &ModuleRep) -> Result<Subspace> {
    if a.algebra() != b.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let h = a.hom_k(b)?;
    let f = a.field();
    let n = a.dim() * b.dim();
    let mut eqs = Mat::zeros(f, 0, n);
    for act in h.actions() {
        eqs = eqs.vstack(act);
    }
    if n == 0 {
        return Ok(Subspace::zero(f, 0));
    }
    Ok(kernel_basis(&eqs))
}

/// Maps `a -> b` factoring through a projective module: `π_b ∘ Hom(a, P(b))`.
pub fn phom(a: &ModuleRep, b: &ModuleRep) -> Result<Subspace> {
    let f = a.field();
    let (da, db) = (a.dim(), b.dim());
    if da == 0 || db == 0 {
        return Ok(Subspace::zero(f, da * db));
    }
    let cover = projective_cover(b);
    let free = ModuleRep::free(a.algebra(), cover.rank);
    let to_free = hom_module(a, &free)?;
    let mut rows = Mat::zeros(f, 0, da * db);
    for g in to_free.basis() {
        rows.push_row(&flatten(&cover.surjection.mul(&g)));
    }
    Ok(Subspace::from_rows(&rows))
}

/// `Hom`-underline: homomorphisms modulo those factoring through projectives.
pub fn stable_hom(a: &ModuleRep, b: &ModuleRep) -> Result<HomSpace> {
    let mut h = hom_module(a, b)?;
    let p = phom(a, b)?;
    let q = QuotientCoords::new(p.clone(), &h.span)?;
    h.stable = Some((p, q));
    Ok(h)
}

/// `Ω^n M` realized as the image of `d_n` inside `P_{n-1}` (for `n = 0`, the module itself).
pub fn omega(res: &Complex, n: i64) -> Result<ModuleRep> {
    if n == 0 {
        return Ok(res.module().clone());
    }
    res.check_degree(n)?;
    res.check_degree(n - 1)?;
    let free = ModuleRep::free(res.algebra(), res.rank(n - 1));
    let img = Subspace::from_rows(&res.boundary_kmat(n).transpose());
    Ok(free.submodule(&img).0)
}

/// `Ê^n(M, N) = Hom`-underline`(Ω^n M, N)`.
pub fn ext_hat(res: &Complex, n: i64, target: &ModuleRep) -> Result<HomSpace> {
    stable_hom(&omega(res, n)?, target)
}

/// Composition of stable classes: `outer ∘ inner` computed on canonical representatives.
pub fn compose_stable(
    outer: &HomSpace,
    inner: &HomSpace,
    composite: &HomSpace,
    outer_coords: &[u8],
    inner_coords: &[u8],
) -> Result<Vec<u8>> {
    let g = outer.representative(outer_coords);
    let f = inner.representative(inner_coords);
    composite.class_coords(&g.mul(&f))
}

/// Searches for an isomorphism `a -> b`: exhaustively over `Hom(a, b)` when it has at most
/// `2^12` elements, otherwise over `tries` seeded random combinations.
pub fn find_isomorphism(a: &ModuleRep, b: &ModuleRep, seed: u64, tries: usize) -> Result<Option<Mat>> {
    if a.dim() != b.dim() {
        return Ok(None);
    }
    let h = hom_module(a, b)?;
    let basis = h.basis();
    let f = a.field();
    let n = a.dim();
    if n == 0 {
        return Ok(Some(Mat::zeros(f, 0, 0)));
    }
    let combine = |coeffs: &[u8]| {
        let mut m = Mat::zeros(f, n, n);
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c != 0 {
                m.add_scaled(b, *c);
            }
        }
        m
    };
    let p = f.p() as u64;
    let total = (p as f64).powi(basis.len() as i32);
    if total <= 4096.0 {
        let mut coeffs = vec![0u8; basis.len()];
        for mut idx in 0..total as u64 {
            for c in coeffs.iter_mut() {
                *c = (idx % p) as u8;
                idx /= p;
            }
            let m = combine(&coeffs);
            if m.rank() == n {
                return Ok(Some(m));
            }
        }
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let coeffs: Vec<u8> = (0..basis.len()).map(|_| rng.gen_range(0..p) as u8).collect();
        let m = combine(&coeffs);
        if m.rank() == n {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
