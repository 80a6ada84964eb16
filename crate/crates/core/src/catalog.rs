//! Explicit cocycles and chain maps for the corpus modules, written in the End-valued model
//! on the labeled resolution of `k`.

use std::collections::BTreeMap;

use crate::algebra::ModuleRep;
use crate::cochain::ChainMap;
use crate::corpus::basis_index;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::resolution::{Complex, FreeMap};
use crate::tate::EndModel;

/// One term `coeff * X^exps * u_label` of the image of a generator.
pub type Term = (i64, Vec<u8>, Vec<i64>);

/// The endomorphism sending each listed basis vector to the given one, and the rest to zero.
pub fn endo(m: &ModuleRep, pairs: &[(&str, &str)]) -> Result<Mat> {
    let n = m.dim();
    let mut f = Mat::zeros(m.field(), n, n);
    for (src, tgt) in pairs {
        let look = |l: &str| basis_index(m, l).ok_or_else(|| Error::InvalidModule(format!("no basis vector `{l}`")));
        f.set(look(tgt)?, look(src)?, 1);
    }
    Ok(f)
}

/// `X^exps . f` in `End_k(M)`.
pub fn end_act(model: &EndModel, exps: &[u8], f: &Mat) -> Mat {
    let alg = model.module().algebra();
    let v = model.end().act(&alg.monomial_from_exponents(exps), f.data());
    Mat::from_data(f.field(), f.rows(), f.cols(), v)
}

/// A chain map of the given shift on a labeled complex, defined generator by generator on
/// source degrees `lo..=hi`. Unlisted generators go to zero.
pub fn chain_map_by_rule(
    pk: &Complex,
    shift: i64,
    lo: i64,
    hi: i64,
    rule: impl Fn(i64, &[i64]) -> Vec<Term>,
) -> Result<ChainMap> {
    let alg = pk.algebra();
    let f = alg.field();
    let mut comps = BTreeMap::new();
    for n in lo..=hi {
        pk.check_degree(n)?;
        pk.check_degree(n - shift)?;
        let src = pk.labels(n).ok_or_else(|| Error::InvalidModule("complex has no labels".into()))?;
        let mut entries: BTreeMap<(usize, usize), crate::algebra::AlgElem> = BTreeMap::new();
        for (g, label) in src.iter().enumerate() {
            for (c, exps, tgt) in rule(n, label) {
                let h = pk
                    .generator_index(n - shift, &tgt)
                    .ok_or_else(|| Error::DegreeMismatch(format!("no generator {tgt:?} in degree {}", n - shift)))?;
                let mut term = alg.monomial_from_exponents(&exps);
                for x in term.0.iter_mut() {
                    *x = f.mul(*x, f.reduce(c));
                }
                let e = entries.entry((h, g)).or_insert_with(|| alg.zero());
                for (x, y) in e.0.iter_mut().zip(&term.0) {
                    *x = f.add(*x, *y);
                }
            }
        }
        let map = FreeMap::from_entries(alg, pk.rank(n - shift), pk.rank(n), |h, g| {
            entries.get(&(h, g)).cloned().unwrap_or_else(|| alg.zero())
        });
        comps.insert(n, map);
    }
    Ok(ChainMap { shift, comps })
}

fn shifted(label: &[i64], i: usize, by: i64) -> Vec<i64> {
    let mut l = label.to_vec();
    l[i] -= by;
    l
}

/// The characteristic 2 module on which one degree-one class acts periodically.
pub mod periodic {
    use super::*;

    /// `f(Zu) = v`.
    pub fn f(m: &ModuleRep) -> Result<Mat> {
        endo(m, &[("Zu", "v")])
    }

    /// `g(Zu) = u`.
    pub fn g(m: &ModuleRep) -> Result<Mat> {
        endo(m, &[("Zu", "u")])
    }

    /// The cocycle `α_n` on `P_n`.
    pub fn alpha(model: &EndModel, n: i64) -> Result<Vec<u8>> {
        let m = model.module();
        let f = f(m)?;
        if n < -1 {
            let g = g(m)?;
            model.cochain(n, &[(&[n, -1, -1], &f), (&[n + 1, -2, -1], &g)])
        } else if n == -1 {
            model.cochain(n, &[(&[-1, -1, -1], &f)])
        } else {
            let yzf = end_act(model, &[0, 1, 1], &f);
            model.cochain(n, &[(&[n, 0, 0], &yzf)])
        }
    }

    /// The degree-one group cocycle dual to `u_{1,0,0}`.
    pub fn zeta(model: &EndModel) -> Result<Vec<u8>> {
        model.group_cochain(1, &[&[1, 0, 0]])
    }

    /// The explicit chain map of `ζ` on source degrees `lo..=hi`.
    pub fn zeta_chain_map(pk: &Complex, lo: i64, hi: i64) -> Result<ChainMap> {
        chain_map_by_rule(pk, 1, lo, hi, |n, a| {
            if n > 0 {
                if a[0] != 0 {
                    vec![(1, vec![0, 0, 0], shifted(a, 0, 1))]
                } else {
                    vec![]
                }
            } else if n == 0 {
                vec![(1, vec![0, 1, 1], vec![-1, -1, -1])]
            } else {
                vec![(1, vec![0, 0, 0], shifted(a, 0, 1))]
            }
        })
    }
}

/// How to read the support condition on `h` in the odd example: the map sends `Y^2 v` to
/// `Yu`, and is zero on the other basis vectors (`Y2v`), or is zero on every basis vector
/// other than `Y^2 u`, which is not a basis vector (`Y2u`), leaving `h = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HReading {
    Y2v,
    Y2u,
}

/// The odd characteristic module with one periodic degree-two class.
pub mod odd {
    use super::*;

    /// `f(Xu) = v`.
    pub fn f(m: &ModuleRep) -> Result<Mat> {
        endo(m, &[("Xu", "v")])
    }

    /// `g(Yu) = Yu`.
    pub fn g(m: &ModuleRep) -> Result<Mat> {
        endo(m, &[("Yu", "Yu")])
    }

    pub fn h(m: &ModuleRep, reading: HReading) -> Result<Mat> {
        match reading {
            HReading::Y2v => endo(m, &[("Y^2v", "Yu")]),
            HReading::Y2u => endo(m, &[]),
        }
    }

    /// The cocycle `α_n` on `P_{2n-1}`; the `g` and `h` terms only enter for `p = 3`.
    pub fn alpha(model: &EndModel, n: i64, reading: HReading) -> Result<Vec<u8>> {
        let m = model.module();
        let p = m.algebra().p();
        let f = f(m)?;
        let deg = 2 * n - 1;
        if n > 0 {
            let yf = end_act(model, &[0, (p - 1) as u8], &f);
            return model.cochain(deg, &[(&[deg, 0], &yf)]);
        }
        if p == 3 && n <= -1 {
            let g = g(m)?;
            // with the sign (-1)^a on the Y term of the differential, h enters negatively
            let h = h(m, reading)?.scaled(m.field().neg(1));
            model.cochain(deg, &[(&[deg, -1], &f), (&[2 * n, -2], &g), (&[2 * n + 1, -3], &h)])
        } else {
            model.cochain(deg, &[(&[deg, -1], &f)])
        }
    }

    /// The degree-two group cocycle dual to `u_{2,0}`.
    pub fn zeta(model: &EndModel) -> Result<Vec<u8>> {
        model.group_cochain(2, &[&[2, 0]])
    }

    /// The explicit chain map of `ζ` on source degrees `lo..=hi`.
    pub fn zeta_chain_map(pk: &Complex, lo: i64, hi: i64) -> Result<ChainMap> {
        let p = pk.algebra().p();
        let top = (p - 1) as u8;
        chain_map_by_rule(pk, 2, lo, hi, |n, a| {
            if n < 0 || (n > 1 && a[0] > 1) {
                vec![(1, vec![0, 0], shifted(a, 0, 2))]
            } else if a == [1, 0] {
                vec![(1, vec![0, top], vec![-1, -1])]
            } else if n == 0 {
                vec![(1, vec![0, top], vec![-2, -1])]
            } else {
                vec![]
            }
        })
    }
}

/// The characteristic 2 module with a degree `-1` class on which the group cohomology
/// acts freely.
pub mod growth {
    use super::*;

    /// `f(Xu) = v`.
    pub fn f(m: &ModuleRep) -> Result<Mat> {
        endo(m, &[("Xu", "v")])
    }

    /// `γ(u_{-1,-1,-1}) = f`.
    pub fn gamma(model: &EndModel) -> Result<Vec<u8>> {
        model.cochain(-1, &[(&[-1, -1, -1], &f(model.module())?)])
    }

    /// `XZf`, sending `u` to `Zv`.
    pub fn g1(model: &EndModel) -> Result<Mat> {
        Ok(end_act(model, &[1, 0, 1], &f(model.module())?))
    }

    /// `XYf`, sending `u` to `Yv`.
    pub fn g2(model: &EndModel) -> Result<Mat> {
        Ok(end_act(model, &[1, 1, 0], &f(model.module())?))
    }

    /// `γ ζ_Y ζ_Z` as a cochain: `u_{0,0,1} -> g1`.
    pub fn beta1(model: &EndModel) -> Result<Vec<u8>> {
        model.cochain(1, &[(&[0, 0, 1], &g1(model)?)])
    }

    /// `γ ζ_Z ζ_Y` as a cochain: `u_{0,1,0} -> g2`.
    pub fn beta2(model: &EndModel) -> Result<Vec<u8>> {
        model.cochain(1, &[(&[0, 1, 0], &g2(model)?)])
    }

    /// The same two values with the generators exchanged (`u_{0,1,0} -> g1`, `u_{0,0,1} -> g2`).
    /// These are cocycles but not cohomologous.
    pub fn exchanged_betas(model: &EndModel) -> Result<(Vec<u8>, Vec<u8>)> {
        Ok((
            model.cochain(1, &[(&[0, 1, 0], &g1(model)?)])?,
            model.cochain(1, &[(&[0, 0, 1], &g2(model)?)])?,
        ))
    }

    /// The degree-zero cochain `u_{0,0,0} -> Xf` whose coboundary is `β1 - β2`.
    pub fn connecting(model: &EndModel) -> Result<Vec<u8>> {
        let xf = end_act(model, &[1, 0, 0], &f(model.module())?);
        model.cochain(0, &[(&[0, 0, 0], &xf)])
    }

    pub fn zeta_y(model: &EndModel) -> Result<Vec<u8>> {
        model.group_cochain(1, &[&[0, 1, 0]])
    }

    pub fn zeta_z(model: &EndModel) -> Result<Vec<u8>> {
        model.group_cochain(1, &[&[0, 0, 1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::homotopy_equal;
    use crate::corpus;

    fn value_on(m: &ModuleRep, f: &Mat, label: &str) -> Vec<u8> {
        f.col(basis_index(m, label).unwrap())
    }

    fn basis_vec(m: &ModuleRep, label: &str) -> Vec<u8> {
        let mut v = vec![0; m.dim()];
        v[basis_index(m, label).unwrap()] = 1;
        v
    }

    #[test]
    fn acted_endomorphisms_have_stated_values() {
        let m = corpus::periodic_module();
        let model = EndModel::new(&m, -2, 2).unwrap();
        let yzf = end_act(&model, &[0, 1, 1], &periodic::f(&m).unwrap());
        assert_eq!(value_on(&m, &yzf, "u"), basis_vec(&m, "Yv"));
        assert_eq!(value_on(&m, &yzf, "Zu"), basis_vec(&m, "YZv"));
        assert!(m.is_homomorphism(&m, &yzf));

        let m = corpus::growth_module();
        let model = EndModel::new(&m, -2, 2).unwrap();
        let g1 = growth::g1(&model).unwrap();
        let g2 = growth::g2(&model).unwrap();
        assert_eq!(value_on(&m, &g1, "u"), basis_vec(&m, "Zv"));
        assert_eq!(value_on(&m, &g2, "u"), basis_vec(&m, "Yv"));
        assert!(m.is_homomorphism(&m, &g1) && m.is_homomorphism(&m, &g2));
    }

    #[test]
    fn periodic_alphas_are_cocycles_and_zeta_map_verifies() {
        let m = corpus::periodic_module();
        let model = EndModel::new(&m, -5, 5).unwrap();
        let coh = model.cohomology();
        for n in -4..=4 {
            assert!(coh.is_cocycle(n, &periodic::alpha(&model, n).unwrap()).unwrap(), "degree {n}");
        }
        let pk = model.complex();
        let z = periodic::zeta_chain_map(pk, -4, 5).unwrap();
        z.verify(pk, pk).unwrap();
        let lifted = model.lift_group_cocycle(1, &periodic::zeta(&model).unwrap()).unwrap();
        assert!(homotopy_equal(pk, pk, &z, &lifted, -3, 4).unwrap());
    }

    #[test]
    fn odd_alphas_need_h_supported_on_y2v() {
        let m = corpus::odd_module(3);
        let model = EndModel::new(&m, -8, 6).unwrap();
        let coh = model.cohomology();
        for n in -3..=3 {
            let deg = 2 * n - 1;
            assert!(coh.is_cocycle(deg, &odd::alpha(&model, n, HReading::Y2v).unwrap()).unwrap(), "n = {n}");
        }
        let bad = (-3..=-1).any(|n| !coh.is_cocycle(2 * n - 1, &odd::alpha(&model, n, HReading::Y2u).unwrap()).unwrap());
        assert!(bad);
    }

    #[test]
    fn odd_zeta_map_verifies() {
        for p in [3, 5] {
            let m = corpus::odd_module(p);
            let model = EndModel::new(&m, -6, 6).unwrap();
            let pk = model.complex();
            let z = odd::zeta_chain_map(pk, -4, 6).unwrap();
            z.verify(pk, pk).unwrap();
            let lifted = model.lift_group_cocycle(2, &odd::zeta(&model).unwrap()).unwrap();
            assert!(homotopy_equal(pk, pk, &z, &lifted, -3, 5).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn growth_betas_differ_by_coboundary() {
        let m = corpus::growth_module();
        let model = EndModel::new(&m, -3, 3).unwrap();
        let coh = model.cohomology();
        let b1 = growth::beta1(&model).unwrap();
        let b2 = growth::beta2(&model).unwrap();
        assert!(coh.is_cocycle(1, &b1).unwrap() && coh.is_cocycle(1, &b2).unwrap());
        let f = m.field();
        let diff: Vec<u8> = b1.iter().zip(&b2).map(|(x, y)| f.sub(*x, *y)).collect();
        let dc = coh.delta(0).unwrap().mul_vec(&growth::connecting(&model).unwrap());
        assert_eq!(dc, diff);
        assert!(!coh.is_coboundary(1, &b1).unwrap());
        let (e1, e2) = growth::exchanged_betas(&model).unwrap();
        assert!(coh.is_cocycle(1, &e1).unwrap() && coh.is_cocycle(1, &e2).unwrap());
        assert_ne!(coh.class_coords(1, &e1).unwrap(), coh.class_coords(1, &e2).unwrap());
    }
}
