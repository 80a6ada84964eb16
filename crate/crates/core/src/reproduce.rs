//! Re-derives the worked examples of the corpus and records every identity as a check.
//!
//! Most identities are confirmed twice: once in the End-valued model on `P(k)` with the
//! printed chain maps, and once in `Ê*(M, M)` on the minimal resolution after conversion.

use serde::Serialize;

use crate::analysis::{Analyzer, GrowthReport, Verdict, SLACK};
use crate::cache::ResolutionCache;
use crate::catalog::{self, end_act, HReading};
use crate::cochain::{homotopy_equal, ChainMap};
use crate::corpus;
use crate::error::{Error, Result};
use crate::linalg::Subspace;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reproduction {
    pub schema: u32,
    pub example: String,
    pub window: (i64, i64),
    pub checks: Vec<Check>,
    pub growth: Option<GrowthReport>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }
}

fn require(window: (i64, i64), degree: i64, need: (i64, i64)) -> Result<()> {
    if window.0 > need.0 || window.1 < need.1 {
        return Err(Error::WindowTooSmall {
            degree,
            n_min: window.0,
            n_max: window.1,
            need_min: window.0.min(need.0),
            need_max: window.1.max(need.1),
        });
    }
    Ok(())
}

fn sub(f: crate::linalg::Fp, a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| f.sub(*x, *y)).collect()
}

/// Checks the printed chain map `printed` of a group class against the machine lift.
fn check_printed_map(rep: &mut Reproduction, an: &Analyzer, printed: &ChainMap, lifted: &ChainMap) -> Result<()> {
    let pk = an.model().complex();
    let (lo, hi) = printed.range();
    let squares = printed.verify(pk, pk);
    rep.check(
        "printed ζ chain map commutes with the differentials",
        squares.is_ok(),
        format!("source degrees {lo}..={hi}"),
    );
    let same = homotopy_equal(pk, pk, printed, lifted, lo + 1, hi - 1)?;
    rep.check("printed ζ chain map is homotopic to the lifted one", same, format!("degrees {}..={}", lo + 1, hi - 1));
    Ok(())
}

/// The periodic characteristic 2 example: `α̃_n ζ = α̃_{n+1} != 0` for `n` in `range`.
pub fn periodic(window: (i64, i64), range: (i64, i64), cache: Option<&ResolutionCache>) -> Result<Reproduction> {
    require(window, range.1 + 1, (range.0 - 1, range.1 + 2))?;
    let m = corpus::periodic_module();
    let an = Analyzer::with_cache(&m, window.0, window.1, cache)?;
    let model = an.model();
    let ring = an.ring();
    let f = m.field();
    let mut rep = Reproduction { schema: crate::analysis::REPORT_SCHEMA, example: "periodic".into(), window, checks: vec![], growth: None };

    let pk = model.complex();
    let printed = catalog::periodic::zeta_chain_map(pk, pk.n_min() + 1, pk.n_max())?;
    let zeta = catalog::periodic::zeta(model)?;
    let lifted = model.lift_group_cocycle(1, &zeta)?;
    check_printed_map(&mut rep, &an, &printed, &lifted)?;

    let zeta_class = an.comparison().end_to_ring(ring, 1, &model.scalar_cochain(&zeta))?;
    rep.check("ζ converts to the first polynomial generator", zeta_class == an.generators()[0].class, "");

    let coh = model.cohomology();
    let mut classes = Vec::new();
    for n in range.0..=range.1 + 1 {
        let a = catalog::periodic::alpha(model, n)?;
        let cocycle = coh.is_cocycle(n, &a)?;
        rep.check(format!("α_{n} is a cocycle"), cocycle, "");
        classes.push((n, a.clone(), an.comparison().end_to_ring(ring, n, &a)?));
    }
    for w in classes.windows(2) {
        let (n, a, ta) = &w[0];
        let (_, b, tb) = &w[1];
        rep.check(format!("α̃_{n} != 0"), !ta.is_zero() && !coh.is_coboundary(*n, a)?, "");
        let acted = model.act(a, *n, &printed)?;
        let end_route = coh.is_coboundary(n + 1, &sub(f, &acted, b))?;
        let ring_route = ring.multiply(ta, &zeta_class)? == *tb && ring.multiply(&zeta_class, ta)? == *tb;
        rep.check(
            format!("α̃_{n} ζ = α̃_{}", n + 1),
            end_route && ring_route,
            format!("printed map on P(k): {end_route}; product in Ê*: {ring_route}"),
        );
    }

    // α_n for n > 0 is YZf on u_{n,0,0}; it is a coboundary only if YZf lies in X·End_k(M)
    let fmap = catalog::periodic::f(&m)?;
    let yzf = end_act(model, &[0, 1, 1], &fmap);
    let de = model.end().dim();
    let x_image: Vec<Vec<u8>> = (0..de)
        .map(|i| {
            let mut e = vec![0u8; de];
            e[i] = 1;
            model.end().act(&m.algebra().monomial_from_exponents(&[1, 0, 0]), &e)
        })
        .collect();
    let in_x_image = Subspace::from_vectors(f, de, &x_image).contains(yzf.data());
    rep.check("YZf is not in X End_k(M)", !in_x_image, "");
    for (n, a, _) in classes.iter().filter(|(n, _, _)| *n > 0) {
        rep.check(format!("α_{n} is not a coboundary"), !coh.is_coboundary(*n, a)?, "");
    }

    // a verdict needs SLACK + 1 steps above the class; higher degrees are left to the streak
    for (n, _, ta) in classes.iter().filter(|(n, _, _)| *n <= range.1 && an.max_steps(*n) > SLACK) {
        let v = an.verdict(ta)?;
        let i = an.ideal_i(*n)?;
        rep.check(
            format!("α̃_{n} has bounded orbit and lies outside I"),
            v == Verdict::Bounded && !i.space.contains(&ta.coords),
            format!("verdict {v}"),
        );
    }
    Ok(rep)
}

/// The odd characteristic example: `α_n` in degree `2n - 1` and `α̃_n ζ = α̃_{n+1} != 0`.
pub fn odd(p: u32, window: (i64, i64), range: (i64, i64), cache: Option<&ResolutionCache>) -> Result<Reproduction> {
    require(window, 2 * range.1 + 1, (2 * range.0 - 2, 2 * range.1 + 2))?;
    let m = corpus::odd_module(p);
    let an = Analyzer::with_cache(&m, window.0, window.1, cache)?;
    let model = an.model();
    let ring = an.ring();
    let f = m.field();
    let mut rep = Reproduction { schema: crate::analysis::REPORT_SCHEMA, example: format!("odd-p{p}"), window, checks: vec![], growth: None };

    let pk = model.complex();
    let printed = catalog::odd::zeta_chain_map(pk, pk.n_min() + 2, pk.n_max())?;
    let zeta = catalog::odd::zeta(model)?;
    let lifted = model.lift_group_cocycle(2, &zeta)?;
    check_printed_map(&mut rep, &an, &printed, &lifted)?;
    let zeta_class = an.comparison().end_to_ring(ring, 2, &model.scalar_cochain(&zeta))?;
    rep.check("ζ converts to the first polynomial generator", zeta_class == an.generators()[0].class, "");

    let coh = model.cohomology();
    let mut classes = Vec::new();
    for n in range.0..=range.1 + 1 {
        let deg = 2 * n - 1;
        let a = catalog::odd::alpha(model, n, HReading::Y2v)?;
        let note = if p == 3 && n <= -1 { "with the g and -h terms" } else { "" };
        rep.check(format!("α_{n} is a cocycle in degree {deg}"), coh.is_cocycle(deg, &a)?, note);
        classes.push((n, a.clone(), an.comparison().end_to_ring(ring, deg, &a)?));
    }
    if p == 3 {
        // the correction terms are needed: dropping h breaks the cocycle condition
        let lows: Vec<i64> = (range.0..=range.1).filter(|&n| n <= -1).collect();
        let mut broken = false;
        for &n in &lows {
            broken |= !coh.is_cocycle(2 * n - 1, &catalog::odd::alpha(model, n, HReading::Y2u)?)?;
        }
        rep.check("α_n without the h term fails to be a cocycle for some n <= -1", broken || lows.is_empty(), "");
    }
    for w in classes.windows(2) {
        let (n, a, ta) = &w[0];
        let (_, b, tb) = &w[1];
        let deg = 2 * n - 1;
        rep.check(format!("α̃_{n} != 0"), !ta.is_zero() && !coh.is_coboundary(deg, a)?, "");
        let acted = model.act(a, deg, &printed)?;
        let end_route = coh.is_coboundary(deg + 2, &sub(f, &acted, b))?;
        let ring_route = ring.multiply(ta, &zeta_class)? == *tb && ring.multiply(&zeta_class, ta)? == *tb;
        rep.check(
            format!("α̃_{n} ζ = α̃_{}", n + 1),
            end_route && ring_route,
            format!("printed map on P(k): {end_route}; product in Ê*: {ring_route}"),
        );
    }
    Ok(rep)
}

/// The growth example: `γ ζ_Y^a ζ_Z^b != 0` for `a + b <= max_total_degree`, `β1 ~ β2`, and
/// `γ` has growing orbit.
pub fn growth(window: (i64, i64), max_total_degree: usize, cache: Option<&ResolutionCache>) -> Result<Reproduction> {
    let top = -1 + max_total_degree as i64;
    require(window, top, (-2, top.max(1) + 1))?;
    let m = corpus::growth_module();
    let an = Analyzer::with_cache(&m, window.0, window.1, cache)?;
    let model = an.model();
    let ring = an.ring();
    let cmp = an.comparison();
    let f = m.field();
    let mut rep = Reproduction { schema: crate::analysis::REPORT_SCHEMA, example: "growth".into(), window, checks: vec![], growth: None };
    let coh = model.cohomology();

    let gamma = catalog::growth::gamma(model)?;
    rep.check("γ is a cocycle", coh.is_cocycle(-1, &gamma)?, "");
    let tgamma = cmp.end_to_ring(ring, -1, &gamma)?;
    let zy = model.lift_group_cocycle(1, &catalog::growth::zeta_y(model)?)?;
    let zz = model.lift_group_cocycle(1, &catalog::growth::zeta_z(model)?)?;
    let (gy, gz) = (&an.generators()[1].class, &an.generators()[2].class);

    for t in 0..=max_total_degree {
        let deg = -1 + t as i64;
        let mut ring_images = Vec::new();
        for a in (0..=t).rev() {
            let b = t - a;
            let mut c = gamma.clone();
            let mut x = tgamma.clone();
            for s in 0..a {
                c = model.act(&c, -1 + s as i64, &zy)?;
                x = ring.multiply(&x, gy)?;
            }
            for s in 0..b {
                c = model.act(&c, -1 + (a + s) as i64, &zz)?;
                x = ring.multiply(&x, gz)?;
            }
            let end_nonzero = !coh.is_coboundary(deg, &c)?;
            let agree = cmp.end_to_ring(ring, deg, &c)? == x;
            rep.check(
                format!("γ ζ_Y^{a} ζ_Z^{b} != 0"),
                end_nonzero && !x.is_zero() && agree,
                format!("End model nonzero: {end_nonzero}; models agree: {agree}"),
            );
            ring_images.push(x.coords);
        }
        let span = Subspace::from_vectors(f, ring.dim(deg)?, &ring_images).dim();
        rep.check(format!("the {} products of total degree {t} are independent", t + 1), span == t + 1, format!("rank {span}"));
    }

    let b1 = catalog::growth::beta1(model)?;
    let b2 = catalog::growth::beta2(model)?;
    let cocycles = coh.is_cocycle(1, &b1)? && coh.is_cocycle(1, &b2)?;
    let same = coh.is_coboundary(1, &sub(f, &b1, &b2))?;
    let ring_same = cmp.end_to_ring(ring, 1, &b1)? == cmp.end_to_ring(ring, 1, &b2)?;
    rep.check("β1 and β2 are cohomologous", cocycles && same && ring_same, format!("End model: {same}; Ê*: {ring_same}"));
    let yz = model.act(&model.act(&gamma, -1, &zy)?, 0, &zz)?;
    rep.check("β1 represents γ ζ_Y ζ_Z", coh.is_coboundary(1, &sub(f, &yz, &b1))?, "");
    let (e1, e2) = catalog::growth::exchanged_betas(model)?;
    rep.check(
        "the exchanged placement is not cohomologous",
        !coh.is_coboundary(1, &sub(f, &e1, &e2))?,
        "values on u_{0,1,0} and u_{0,0,1} swapped",
    );

    let steps = an.max_steps(-1);
    let g = an.orbit_growth(&tgamma, steps)?;
    rep.check("orbit of γ grows", g.verdict == Verdict::Growth, format!("h = {:?}", g.hilbert));
    let j = an.ideal_j(-1, 4096)?;
    let outside = !j.space.contains(&tgamma.coords);
    rep.check(
        "γ is not in J^-1",
        g.verdict == Verdict::Growth && outside,
        format!("dim J^-1 >= {} (exact: {})", j.space.dim(), j.exact),
    );
    rep.growth = Some(g);
    Ok(rep)
}

/// Runs the example named by a corpus id, asserting its identities for every class whose
/// degree lies in `degrees`. The resolution window is `degrees` widened by 2 on each side.
pub fn by_id(id: &str, degrees: (i64, i64), max_total_degree: usize, cache: Option<&ResolutionCache>) -> Result<Reproduction> {
    let (a, b) = degrees;
    let window = (a.min(-1) - 2, b.max(0) + 2);
    match id {
        "periodic" => periodic(window, (a, b - 1), cache),
        "odd-p3" | "odd-p5" => {
            let p = if id == "odd-p3" { 3 } else { 5 };
            // α_n sits in degree 2n - 1 and ζ·α_n in degree 2n + 1
            let lo = (a + 1).div_euclid(2) + ((a + 1).rem_euclid(2) != 0) as i64;
            let hi = (b + 1).div_euclid(2) - 1;
            odd(p, window, (lo, hi), cache)
        }
        "growth" => growth(window, max_total_degree, cache),
        _ => Err(Error::InvalidModule(format!("unknown example `{id}`; known: periodic, odd-p3, odd-p5, growth"))),
    }
}
