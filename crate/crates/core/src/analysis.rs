//! The action of the polynomial part of group cohomology on `Ê*(M, M)`: orbit growth, the
//! ideals `I`, `J` and the windowed streak ideal, Tate duality, the negative-degree bound, and
//! nilpotency scans.
//!
//! Every statement here is relative to the resolution window. Verdicts that would need more
//! degrees than the window offers come back inconclusive rather than guessed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::algebra::ModuleRep;
use crate::cache::{resolve, ResolutionCache};
use crate::cochain::ChainMap;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Mat, QuotientCoords, Subspace};
use crate::resolution::syzygy;
use crate::stable::{find_isomorphism, hom_module};
use crate::tate::{Class, Comparison, EndModel, TateRing};

/// Version of the serialized report layout.
pub const REPORT_SCHEMA: u32 = 1;

/// Number of trailing finite differences that must agree before a growth verdict is issued.
pub const SLACK: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Finite,
    Bounded,
    Growth,
    Inconclusive,
}

impl Verdict {
    pub fn in_j(self) -> Option<bool> {
        match self {
            Verdict::Finite | Verdict::Bounded => Some(true),
            Verdict::Growth => Some(false),
            Verdict::Inconclusive => None,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Finite => "FINITE",
            Verdict::Bounded => "BOUNDED",
            Verdict::Growth => "GROWTH",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

/// Applies the trailing-slack rule to a Hilbert function sampled on consecutive steps.
pub fn classify(h: &[usize]) -> Verdict {
    if h.len() < SLACK + 1 {
        return Verdict::Inconclusive;
    }
    let tail = &h[h.len() - SLACK - 1..];
    if tail[1..].iter().all(|&x| x == 0) {
        return Verdict::Finite;
    }
    if tail.iter().all(|&x| x == tail[0]) {
        return Verdict::Bounded;
    }
    if tail.windows(2).all(|w| w[1] > w[0]) {
        return Verdict::Growth;
    }
    Verdict::Inconclusive
}

/// `1 +` the degree of the polynomial that `h` eventually follows, read off from the
/// trailing finite differences.
pub fn krull_estimate(h: &[usize], verdict: Verdict) -> Option<usize> {
    match verdict {
        Verdict::Finite => Some(0),
        Verdict::Bounded => Some(1),
        Verdict::Inconclusive => None,
        Verdict::Growth => {
            let mut seq: Vec<i64> = h.iter().map(|&x| x as i64).collect();
            for k in 1..h.len() {
                seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
                if seq.len() < 2 {
                    return None;
                }
                let tail = &seq[seq.len().saturating_sub(SLACK)..];
                if tail[0] != 0 && tail.iter().all(|&x| x == tail[0]) {
                    return Some(k + 1);
                }
            }
            None
        }
    }
}

/// Exponent vectors of the monomials of total degree `t` in `r` variables, in decreasing
/// lexicographic order.
pub fn monomials(r: usize, t: usize) -> Vec<Vec<u32>> {
    fn rec(r: usize, t: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 1 {
            prefix.push(t);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=t).rev() {
            prefix.push(a);
            rec(r - 1, t - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if t == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(r, t as u32, &mut vec![], &mut out);
    out
}

/// A polynomial generator of group cohomology: `ζ_i` dual to `u_{e_i}` (`p = 2`) or to
/// `u_{2 e_i}` (`p` odd).
#[derive(Clone, Debug)]
pub struct HGenerator {
    pub name: String,
    pub degree: i64,
    pub group_cocycle: Vec<u8>,
    pub chain_map: ChainMap,
    pub class: Class,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub degree: i64,
    pub coords: Vec<u8>,
    pub step: i64,
    pub requested_steps: usize,
    pub steps: usize,
    /// `h(t) = dim H^{t·step} α` for `t = 0..=steps`
    pub hilbert: Vec<usize>,
    /// dimension of the annihilator in each degree `t·step`
    pub ann_dims: Vec<usize>,
    /// annihilating polynomials not generated by those of lower degree
    pub ann_generators: Vec<String>,
    pub krull_estimate: Option<usize>,
    pub verdict: Verdict,
    pub slack: usize,
}

/// A subspace of `Ê^n` with how far it was pushed and whether it settled.
#[derive(Clone, Debug)]
pub struct IdealSlice {
    pub degree: i64,
    pub space: Subspace,
    /// number of steps of the action used
    pub depth: usize,
    pub stabilized: bool,
}

impl IdealSlice {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// `J^n`: a certified lower bound and whether it was shown to be everything.
#[derive(Clone, Debug)]
pub struct JSlice {
    pub degree: i64,
    pub space: Subspace,
    /// dimension of `I^n` plus the point kernels, before enumeration
    pub linear_bound: usize,
    /// number of coset representatives tested for growth
    pub tested: usize,
    pub inconclusive: usize,
    /// true when every class outside `space` was certified GROWTH
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct StreakSlice {
    pub degree: i64,
    /// `(t, dim 𝔍_t^n)` for `t` decreasing
    pub by_cut: Vec<(i64, usize)>,
    pub stabilized_at: Option<i64>,
    pub space: Subspace,
}

/// Membership of one class in the three ideals.
#[derive(Clone, Debug, Serialize)]
pub struct IdealVerdict {
    pub degree: i64,
    pub in_i: Option<bool>,
    pub in_j: Option<bool>,
    pub in_streak: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem42Report {
    pub lcm_degree: i64,
    pub max_ext_dim: usize,
    pub ext_dims: Vec<usize>,
    pub bound: i64,
    /// `(n, verdicts of the basis classes of Ê^{-n})` for `bound < n <= limit`
    pub checked: Vec<(i64, Vec<Verdict>)>,
    pub vacuous: bool,
    pub growth_below_bound: bool,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadicalReport {
    pub end_dim: usize,
    pub radical_dim: usize,
    /// dims of `rad^1, rad^2, ...` down to 0
    pub powers: Vec<usize>,
    pub nilpotence: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Periodicity {
    Projective,
    Periodic { period: usize },
    NotPeriodic { syzygy_dims: Vec<usize>, strictly_growing: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct NilpotencyReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub window: (i64, i64),
    pub bound_i: Option<i64>,
    pub radical_nilpotence: Option<usize>,
    pub max_nonzero_length: usize,
    /// `(degree, basis index)` factors of one longest nonzero product
    pub witness: Vec<(i64, usize)>,
    pub witness_coords: Vec<u8>,
    pub products_by_length: Vec<usize>,
    pub theoretical_bound: Option<i64>,
    pub within_bound: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub generator: Vec<u8>,
    pub step: i64,
    /// `(n, dim J^n/I^n, rank of ζ on it, dim J^{n+s}/I^{n+s})`
    pub degrees: Vec<(i64, usize, usize, usize)>,
    pub injective: bool,
    pub monotone: bool,
}

/// `Ê*(M, M)` together with the group cohomology action and the comparison to the End model.
pub struct Analyzer {
    ring: TateRing,
    model: EndModel,
    comparison: Comparison,
    gens: Vec<HGenerator>,
    step: i64,
    actions: Mutex<HashMap<(Vec<u8>, i64), Arc<Mat>>>,
    operators: Mutex<HashMap<i64, Vec<Vec<Arc<Mat>>>>>,
    i_cache: Mutex<HashMap<i64, IdealSlice>>,
    products: Mutex<HashMap<(i64, i64), Subspace>>,
}

impl std::fmt::Debug for Analyzer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Analyzer({:?})", self.ring)
    }
}

impl Analyzer {
    pub fn new(m: &ModuleRep, n_min: i64, n_max: i64) -> Result<Self> {
        Self::with_cache(m, n_min, n_max, None)
    }

    /// As [`Analyzer::new`], reading and writing the resolution of `M` through `cache`.
    pub fn with_cache(m: &ModuleRep, n_min: i64, n_max: i64, cache: Option<&ResolutionCache>) -> Result<Self> {
        let ring = TateRing::from_complex(Arc::new(resolve(m, n_min, n_max, cache)?))?;
        let model = EndModel::new(m, n_min, n_max)?;
        let comparison = Comparison::new(&ring, &model)?;
        let alg = m.algebra();
        let step: i64 = if alg.p() == 2 { 1 } else { 2 };
        let r = alg.rank();
        let mut gens = Vec::with_capacity(r);
        for i in 0..r {
            let mut label = vec![0i64; r];
            label[i] = step;
            let cocycle = model.group_cochain(step, &[&label])?;
            if !model.group_cohomology().is_cocycle(step, &cocycle)? {
                return Err(Error::Verification(format!("generator {i} is not a cocycle")));
            }
            let chain_map = model.lift_group_cocycle(step, &cocycle)?;
            chain_map.verify(model.complex(), model.complex())?;
            let class = comparison.end_to_ring(&ring, step, &model.scalar_cochain(&cocycle))?;
            gens.push(HGenerator { name: format!("z{}", alg.names()[i]), degree: step, group_cocycle: cocycle, chain_map, class });
        }
        Ok(Analyzer {
            ring,
            model,
            comparison,
            gens,
            step,
            actions: Mutex::new(HashMap::new()),
            operators: Mutex::new(HashMap::new()),
            i_cache: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        })
    }

    pub fn ring(&self) -> &TateRing {
        &self.ring
    }
    pub fn model(&self) -> &EndModel {
        &self.model
    }
    pub fn comparison(&self) -> &Comparison {
        &self.comparison
    }
    pub fn generators(&self) -> &[HGenerator] {
        &self.gens
    }
    /// Degree of the polynomial generators.
    pub fn step(&self) -> i64 {
        self.step
    }
    pub fn degree_range(&self) -> (i64, i64) {
        self.ring.degree_range()
    }
    fn field(&self) -> crate::linalg::Fp {
        self.ring.algebra().field()
    }
    fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Number of generator steps available above degree `n`.
    pub fn max_steps(&self, n: i64) -> usize {
        let hi = self.degree_range().1;
        if n > hi {
            0
        } else {
            ((hi - n) / self.step) as usize
        }
    }

    /// The class `Σ c_i ζ_i` in `Ê^step`.
    pub fn linear_class(&self, coeffs: &[u8]) -> Class {
        let mut acc = Class { degree: self.step, coords: vec![0; self.gens[0].class.coords.len()] };
        for (c, g) in coeffs.iter().zip(&self.gens) {
            if *c != 0 {
                acc = self.ring.add(&acc, &self.ring.scale(&g.class, *c));
            }
        }
        acc
    }

    /// Matrix of multiplication by `Σ c_i ζ_i` from `Ê^n` to `Ê^{n+step}`.
    pub fn action(&self, coeffs: &[u8], n: i64) -> Result<Arc<Mat>> {
        let key = (coeffs.to_vec(), n);
        if let Some(m) = self.actions.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.ring.right_multiplication(&self.linear_class(coeffs), n)?);
        self.actions.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    fn unit(&self, i: usize) -> Vec<u8> {
        let mut e = vec![0u8; self.rank()];
        e[i] = 1;
        e
    }

    /// Operators `Ê^n -> Ê^{n + t·step}` of all monomials of degree `t`, in the order of [`monomials`].
    pub fn monomial_operators(&self, n: i64, t: usize) -> Result<Vec<Arc<Mat>>> {
        {
            let cache = self.operators.lock().unwrap();
            if let Some(levels) = cache.get(&n) {
                if levels.len() > t {
                    return Ok(levels[t].clone());
                }
            }
        }
        let r = self.rank();
        let mut levels = self.operators.lock().unwrap().get(&n).cloned().unwrap_or_default();
        if levels.is_empty() {
            let d = self.ring.dim(n)?;
            levels.push(vec![Arc::new(Mat::identity(self.field(), d))]);
        }
        while levels.len() <= t {
            let s = levels.len();
            let prev_mons: HashMap<Vec<u32>, usize> =
                monomials(r, s - 1).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
            let from = n + (s as i64 - 1) * self.step;
            let mut level = Vec::new();
            for mon in monomials(r, s) {
                let i = mon.iter().position(|&x| x > 0).unwrap();
                let mut lower = mon.clone();
                lower[i] -= 1;
                let a = self.action(&self.unit(i), from)?;
                level.push(Arc::new(a.mul(&levels[s - 1][prev_mons[&lower]])));
            }
            levels.push(level);
        }
        let out = levels[t].clone();
        self.operators.lock().unwrap().insert(n, levels);
        Ok(out)
    }

    fn format_poly(&self, mons: &[Vec<u32>], coeffs: &[u8]) -> String {
        let mut terms = Vec::new();
        for (mon, &c) in mons.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            let mut factors: Vec<String> = Vec::new();
            for (g, &e) in self.gens.iter().zip(mon) {
                match e {
                    0 => {}
                    1 => factors.push(g.name.clone()),
                    _ => factors.push(format!("{}^{}", g.name, e)),
                }
            }
            let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
            terms.push(if c == 1 { body } else { format!("{c}*{body}") });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Images of `α` under all degree-`t` monomials.
    fn orbit_images(&self, a: &Class, t: usize) -> Result<Vec<Vec<u8>>> {
        Ok(self.monomial_operators(a.degree, t)?.iter().map(|op| op.mul_vec(&a.coords)).collect())
    }

    pub fn hilbert(&self, a: &Class, steps: usize) -> Result<Vec<usize>> {
        let f = self.field();
        (0..=steps)
            .map(|t| {
                let imgs = self.orbit_images(a, t)?;
                let target = self.ring.dim(a.degree + t as i64 * self.step)?;
                Ok(Subspace::from_vectors(f, target, &imgs).dim())
            })
            .collect()
    }

    /// Growth of `H* · α` over `steps` generator steps (fewer if the window runs out).
    pub fn orbit_growth(&self, a: &Class, steps: usize) -> Result<GrowthReport> {
        let f = self.field();
        let r = self.rank();
        let avail = steps.min(self.max_steps(a.degree));
        let mut hilbert = Vec::new();
        let mut ann_dims = Vec::new();
        let mut ann_generators = Vec::new();
        let mut prev_kernel: Option<Subspace> = None;
        for t in 0..=avail {
            let imgs = self.orbit_images(a, t)?;
            let target = self.ring.dim(a.degree + t as i64 * self.step)?;
            let mons = monomials(r, t);
            let image_mat = Mat::from_cols(f, target, &imgs);
            hilbert.push(Subspace::from_vectors(f, target, &imgs).dim());
            let kernel = if target == 0 { Subspace::full(f, mons.len()) } else { kernel_basis(&image_mat) };
            ann_dims.push(kernel.dim());
            // part of the kernel generated from lower degree: ζ_i · (previous kernel)
            let index: HashMap<Vec<u32>, usize> = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mut generated = Vec::new();
            if let Some(prev) = &prev_kernel {
                let prev_mons = monomials(r, t - 1);
                for v in prev.vectors() {
                    for i in 0..r {
                        let mut w = vec![0u8; mons.len()];
                        for (j, &c) in v.iter().enumerate() {
                            if c != 0 {
                                let mut m = prev_mons[j].clone();
                                m[i] += 1;
                                w[index[&m]] = c;
                            }
                        }
                        generated.push(w);
                    }
                }
            }
            let generated = Subspace::from_vectors(f, mons.len(), &generated);
            let fresh = generated.quotient_complement(&kernel.sum(&generated)?)?;
            for v in fresh.vectors() {
                ann_generators.push(self.format_poly(&mons, &v));
            }
            prev_kernel = Some(kernel);
        }
        let verdict = classify(&hilbert);
        Ok(GrowthReport {
            degree: a.degree,
            coords: a.coords.clone(),
            step: self.step,
            requested_steps: steps,
            steps: avail,
            krull_estimate: krull_estimate(&hilbert, verdict),
            hilbert,
            ann_dims,
            ann_generators,
            verdict,
            slack: SLACK,
        })
    }

    /// The verdict for `α` using every step the window allows.
    pub fn verdict(&self, a: &Class) -> Result<Verdict> {
        let steps = self.max_steps(a.degree);
        Ok(classify(&self.hilbert(a, steps)?))
    }

    /// Classes of `Ê^n` killed by every monomial of degree `t`.
    pub fn annihilated(&self, n: i64, t: usize) -> Result<Subspace> {
        let f = self.field();
        let d = self.ring.dim(n)?;
        let mut stack = Mat::zeros(f, 0, d);
        for op in self.monomial_operators(n, t)? {
            stack = stack.vstack(&op);
        }
        Ok(if stack.rows() == 0 { Subspace::full(f, d) } else { kernel_basis(&stack) })
    }

    /// `I^n`: classes with finite orbit, as the classes killed by all monomials of the largest
    /// degree the window allows. Settled when the last `SLACK` kernels agree.
    pub fn ideal_i(&self, n: i64) -> Result<IdealSlice> {
        if let Some(s) = self.i_cache.lock().unwrap().get(&n) {
            return Ok(s.clone());
        }
        let depth = self.max_steps(n);
        let mut dims = Vec::new();
        let mut last = Subspace::zero(self.field(), self.ring.dim(n)?);
        for t in 1..=depth {
            last = self.annihilated(n, t)?;
            dims.push(last.dim());
        }
        let stabilized = dims.len() >= SLACK && dims[dims.len() - SLACK..].iter().all(|&d| d == dims[dims.len() - 1]);
        let slice = IdealSlice { degree: n, space: last, depth, stabilized };
        self.i_cache.lock().unwrap().insert(n, slice.clone());
        Ok(slice)
    }

    /// Points of projective space over the prime field, normalized with leading 1.
    pub fn rational_points(&self) -> Vec<Vec<u8>> {
        let p = self.field().p() as u32;
        let r = self.rank();
        let mut out = Vec::new();
        let total = (p as usize).pow(r as u32);
        for code in 1..total {
            let mut v = vec![0u8; r];
            let mut c = code;
            for x in v.iter_mut() {
                *x = (c % p as usize) as u8;
                c /= p as usize;
            }
            if v.iter().find(|&&x| x != 0) == Some(&1) {
                out.push(v);
            }
        }
        out
    }

    /// Classes of `Ê^n` killed by `𝔭^power`, where `𝔭` is the ideal of linear forms vanishing
    /// at `point`. Their orbits have dimension at most one.
    pub fn point_kernel(&self, n: i64, point: &[u8], power: usize) -> Result<Subspace> {
        let f = self.field();
        let r = self.rank();
        let d = self.ring.dim(n)?;
        let forms = kernel_basis(&Mat::from_data(f, 1, r, point.to_vec())).vectors();
        if forms.is_empty() {
            return Ok(Subspace::full(f, d));
        }
        // products of `power` forms, built level by level
        let mut level: Vec<Mat> = vec![Mat::identity(f, d)];
        let mut level_mons: Vec<Vec<u32>> = vec![vec![0; forms.len()]];
        for s in 1..=power {
            let from = n + (s as i64 - 1) * self.step;
            let index: HashMap<Vec<u32>, usize> = level_mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mons = monomials(forms.len(), s);
            let mut next = Vec::with_capacity(mons.len());
            for mon in &mons {
                let i = mon.iter().position(|&x| x > 0).unwrap();
                let mut lower = mon.clone();
                lower[i] -= 1;
                next.push(self.action(&forms[i], from)?.mul(&level[index[&lower]]));
            }
            level = next;
            level_mons = mons;
        }
        let mut stack = Mat::zeros(f, 0, d);
        for op in &level {
            stack = stack.vstack(op);
        }
        Ok(if stack.rows() == 0 { Subspace::full(f, d) } else { kernel_basis(&stack) })
    }

    /// `J^n`: the linear lower bound `I^n + Σ_points ker 𝔭^N`, enlarged by enumerating the
    /// quotient when it has at most `budget` lines; exact when every other line is GROWTH.
    pub fn ideal_j(&self, n: i64, budget: usize) -> Result<JSlice> {
        let f = self.field();
        let d = self.ring.dim(n)?;
        let full = Subspace::full(f, d);
        let depth = self.max_steps(n);
        let mut space = self.ideal_i(n)?.space;
        for pt in self.rational_points() {
            space = space.sum(&self.point_kernel(n, &pt, depth)?)?;
        }
        let linear_bound = space.dim();
        let mut tested = 0;
        let mut inconclusive = 0;
        let p = f.p() as usize;
        'outer: loop {
            let q = QuotientCoords::new(space.clone(), &full)?;
            let qd = q.dim();
            if qd == 0 {
                break;
            }
            let lines = (p.checked_pow(qd as u32).unwrap_or(usize::MAX) - 1) / (p - 1);
            if lines > budget {
                return Ok(JSlice { degree: n, space, linear_bound, tested, inconclusive: inconclusive + 1, exact: false });
            }
            inconclusive = 0;
            for code in 1..p.pow(qd as u32) {
                let mut v = vec![0u8; qd];
                let mut c = code;
                for x in v.iter_mut() {
                    *x = (c % p) as u8;
                    c /= p;
                }
                if v.iter().find(|&&x| x != 0) != Some(&1) {
                    continue;
                }
                tested += 1;
                let a = Class { degree: n, coords: q.lift(&v) };
                match self.verdict(&a)? {
                    Verdict::Finite | Verdict::Bounded => {
                        space = space.sum(&Subspace::from_vectors(f, d, &[a.coords]))?;
                        continue 'outer;
                    }
                    Verdict::Growth => {}
                    Verdict::Inconclusive => inconclusive += 1,
                }
            }
            break;
        }
        Ok(JSlice { degree: n, space, linear_bound, tested, inconclusive, exact: inconclusive == 0 })
    }

    /// `Ê^{n-m} · Ê^m` inside `Ê^n`.
    pub fn products_into(&self, n: i64, m: i64) -> Result<Subspace> {
        if let Some(s) = self.products.lock().unwrap().get(&(n, m)) {
            return Ok(s.clone());
        }
        let f = self.field();
        let d = self.ring.dim(n)?;
        let mut rows = Mat::zeros(f, 0, d);
        for tau in self.ring.basis(m)? {
            let mat = self.ring.right_multiplication(&tau, n - m)?;
            rows = rows.vstack(&mat.transpose());
        }
        let s = Subspace::from_rows(&rows);
        self.products.lock().unwrap().insert((n, m), s.clone());
        Ok(s)
    }

    /// `𝔍_t^n = I^n + Σ_{m <= t} Ê^{n-m} Ê^m`, with `m` and `n - m` inside the window.
    pub fn streak_cut(&self, n: i64, t: i64) -> Result<Subspace> {
        let (lo, hi) = self.degree_range();
        let mut s = self.ideal_i(n)?.space;
        for m in lo.max(n - hi)..=t {
            s = s.sum(&self.products_into(n, m)?)?;
        }
        Ok(s)
    }

    /// `𝔍_t^n` for `t` from `min(n, -1)` down to the last cut with a product in the window,
    /// stopping at the first two consecutive cuts that agree.
    pub fn streak(&self, n: i64) -> Result<StreakSlice> {
        let (lo, hi) = self.degree_range();
        let bottom = lo.max(n - hi);
        let mut by_cut = Vec::new();
        let mut prev: Option<Subspace> = None;
        let mut t = n.min(-1);
        while t >= bottom {
            let s = self.streak_cut(n, t)?;
            by_cut.push((t, s.dim()));
            if let Some(p) = &prev {
                if p.dim() == s.dim() {
                    return Ok(StreakSlice { degree: n, by_cut, stabilized_at: Some(t + 1), space: s });
                }
            }
            prev = Some(s);
            t -= 1;
        }
        let space = prev.unwrap_or_else(|| Subspace::zero(self.field(), self.ring.dim(n).unwrap_or(0)));
        Ok(StreakSlice { degree: n, by_cut, stabilized_at: None, space })
    }

    /// Membership flags for one class.
    pub fn ideal_verdict(&self, a: &Class, budget: usize) -> Result<IdealVerdict> {
        let i = self.ideal_i(a.degree)?;
        let j = self.ideal_j(a.degree, budget)?;
        let s = self.streak(a.degree)?;
        let in_i = i.space.contains(&a.coords);
        let in_j = j.space.contains(&a.coords);
        Ok(IdealVerdict {
            degree: a.degree,
            in_i: if in_i || i.stabilized { Some(in_i) } else { None },
            in_j: if in_j || j.exact { Some(in_j) } else { None },
            in_streak: s.stabilized_at.map(|_| s.space.contains(&a.coords)),
        })
    }

    /// Checks that multiplication by `Σ c_i ζ_i` is injective on `J^n/I^n` for every `n` in
    /// `degrees` where both `J^n` and `J^{n+s}` are exact, and that the quotient dimensions are
    /// monotone.
    pub fn zeta_injectivity(&self, coeffs: &[u8], degrees: &[i64], budget: usize) -> Result<InjectivityReport> {
        let mut rows = Vec::new();
        let mut injective = true;
        let mut monotone = true;
        for &n in degrees {
            let (j0, j1) = (self.ideal_j(n, budget)?, self.ideal_j(n + self.step, budget)?);
            if !j0.exact || !j1.exact {
                continue;
            }
            let (i0, i1) = (self.ideal_i(n)?.space, self.ideal_i(n + self.step)?.space);
            let q0 = QuotientCoords::new(i0, &j0.space)?;
            let q1 = QuotientCoords::new(i1.clone(), &j1.space)?;
            let a = self.action(coeffs, n)?;
            let f = self.field();
            let mut imgs = Vec::new();
            for v in q0.complement().vectors() {
                let w = a.mul_vec(&v);
                if !j1.space.contains(&w) {
                    return Err(Error::Verification(format!("ζ·J^{n} is not inside J^{}", n + self.step)));
                }
                imgs.push(q1.coords(&w));
            }
            let rank = Subspace::from_vectors(f, q1.dim(), &imgs).dim();
            injective &= rank == q0.dim();
            monotone &= q0.dim() <= q1.dim();
            rows.push((n, q0.dim(), rank, q1.dim()));
        }
        Ok(InjectivityReport { generator: coeffs.to_vec(), step: self.step, degrees: rows, injective, monotone })
    }

    /// A linear combination of the generators that is injective on `J/I` across `degrees`,
    /// single generators first.
    pub fn select_zeta(&self, degrees: &[i64], budget: usize) -> Result<InjectivityReport> {
        let mut candidates: Vec<Vec<u8>> = (0..self.rank()).map(|i| self.unit(i)).collect();
        for pt in self.rational_points() {
            if pt.iter().filter(|&&x| x != 0).count() > 1 {
                candidates.push(pt);
            }
        }
        let mut last = None;
        for c in candidates {
            let rep = self.zeta_injectivity(&c, degrees, budget)?;
            if rep.injective {
                return Ok(rep);
            }
            last = Some(rep);
        }
        Err(Error::Verification(format!("no linear generator is injective on J/I: {last:?}")))
    }

    /// Multiplication by `Σ c_i ζ_i` on the stabilized streak quotients `𝔍^n/I^n -> 𝔍^{n+s}/I^{n+s}`,
    /// for those `n` in `degrees` where both sides stabilized.
    pub fn streak_bijectivity(&self, coeffs: &[u8], degrees: &[i64]) -> Result<InjectivityReport> {
        let f = self.field();
        let mut rows = Vec::new();
        let mut bijective = true;
        let mut monotone = true;
        for &n in degrees {
            let (s0, s1) = (self.streak(n)?, self.streak(n + self.step)?);
            let (i0, i1) = (self.ideal_i(n)?, self.ideal_i(n + self.step)?);
            if s0.stabilized_at.is_none() || s1.stabilized_at.is_none() || !i0.stabilized || !i1.stabilized {
                continue;
            }
            let q0 = QuotientCoords::new(i0.space, &s0.space)?;
            let q1 = QuotientCoords::new(i1.space, &s1.space)?;
            let a = self.action(coeffs, n)?;
            let mut imgs = Vec::new();
            for v in q0.complement().vectors() {
                let w = a.mul_vec(&v);
                if !s1.space.contains(&w) {
                    return Err(Error::Verification(format!("ζ·𝔍^{n} is not inside 𝔍^{}", n + self.step)));
                }
                imgs.push(q1.coords(&w));
            }
            let rank = Subspace::from_vectors(f, q1.dim(), &imgs).dim();
            bijective &= rank == q0.dim() && rank == q1.dim();
            monotone &= q0.dim() <= q1.dim();
            rows.push((n, q0.dim(), rank, q1.dim()));
        }
        Ok(InjectivityReport { generator: coeffs.to_vec(), step: self.step, degrees: rows, injective: bijective, monotone })
    }

    /// Tate pairing `⟨α, β⟩ = trace` of `αβ` read at `u_{-1,...,-1}` in the End model.
    pub fn pairing(&self, a: &Class, b: &Class) -> Result<u8> {
        if a.degree + b.degree != -1 {
            return Err(Error::DegreeMismatch(format!("pairing needs degrees summing to -1, got {} and {}", a.degree, b.degree)));
        }
        let prod = self.ring.multiply(a, b)?;
        let c = self.comparison.ring_to_end(&self.ring, &prod)?;
        let v = self.model.value(&c, 0);
        let f = self.field();
        Ok((0..v.rows()).fold(0u8, |acc, i| f.add(acc, v.get(i, i))))
    }

    /// Rows: basis of `Ê^n`; columns: basis of `Ê^{-n-1}`.
    pub fn duality_matrix(&self, n: i64) -> Result<Mat> {
        let rows = self.ring.basis(n)?;
        let cols = self.ring.basis(-n - 1)?;
        let mut m = Mat::zeros(self.field(), rows.len(), cols.len());
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in cols.iter().enumerate() {
                m.set(i, j, self.pairing(a, b)?);
            }
        }
        Ok(m)
    }

    /// Nilpotence degree of the radical of `Ê^0`. The radical is the kernel of the eigenvalue
    /// functional, and is checked to consist of nilpotent elements closed under products.
    pub fn radical_nilpotence(&self) -> Result<RadicalReport> {
        let f = self.field();
        let basis = self.ring.basis(0)?;
        let d = basis.len();
        let p = f.p();
        let mut eig = Vec::with_capacity(d);
        for b in &basis {
            let l = self.ring.left_multiplication(b, 0)?;
            let ev = (0..p).find(|&c| {
                let shifted = l.sub(&Mat::identity(f, d).scaled(c));
                shifted.pow(d as u32).is_zero()
            });
            match ev {
                Some(c) => eig.push(c),
                None => return Err(Error::Decomposable("a basis element of the stable endomorphism ring has no single eigenvalue".into())),
            }
        }
        let functional = Mat::from_data(f, 1, d, eig);
        let rad = kernel_basis(&functional);
        let rad_classes: Vec<Class> = rad.vectors().into_iter().map(|c| Class { degree: 0, coords: c }).collect();
        for x in &rad_classes {
            if !self.ring.left_multiplication(x, 0)?.pow(d.max(1) as u32).is_zero() {
                return Err(Error::Decomposable("the eigenvalue-zero part contains a non-nilpotent element".into()));
            }
        }
        let mut powers = vec![rad.dim()];
        let mut current = rad_classes.clone();
        while !current.is_empty() {
            let mut prods = Vec::new();
            for x in &current {
                for y in &rad_classes {
                    let z = self.ring.multiply(x, y)?;
                    if !rad.contains(&z.coords) {
                        return Err(Error::Decomposable("the radical candidate is not closed under products".into()));
                    }
                    prods.push(z.coords);
                }
            }
            let next = Subspace::from_vectors(f, d, &prods);
            powers.push(next.dim());
            current = next.vectors().into_iter().map(|c| Class { degree: 0, coords: c }).collect();
            if powers.len() > d + 2 {
                return Err(Error::Verification("radical powers do not reach zero".into()));
            }
        }
        let nilpotence = powers.iter().position(|&x| x == 0).unwrap() + 1;
        Ok(RadicalReport { end_dim: d, radical_dim: rad.dim(), powers, nilpotence })
    }

    /// Largest degree in the window with `I^n != 0`.
    pub fn bound_i(&self) -> Result<Option<i64>> {
        let (lo, hi) = self.degree_range();
        for n in (lo..=hi).rev() {
            if self.ideal_i(n)?.dim() > 0 {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// The bound on negative degrees beyond which every class should have bounded orbit:
    /// `ℓ` the lcm of the degrees of a generating set of `H*(G,k)`, `d` the largest
    /// `dim Ext^j(M,M)` for `0 <= j <= ℓ`; classes of `Ê^{-n}` for `dℓ < n <= limit` are classified.
    pub fn theorem42_check(&self, limit: i64) -> Result<Theorem42Report> {
        let alg = self.ring.algebra();
        let lcm_degree: i64 = if alg.p() == 2 { 1 } else { 2 };
        let m = self.ring.module();
        let mut ext_dims = vec![hom_module(m, m)?.dim()];
        for j in 1..=lcm_degree {
            ext_dims.push(self.ring.dim(j)?);
        }
        let max_ext_dim = *ext_dims.iter().max().unwrap();
        let bound = max_ext_dim as i64 * lcm_degree;
        let lo = self.degree_range().0;
        let mut checked = Vec::new();
        let mut growth_below_bound = false;
        let mut inconclusive = 0;
        for n in bound + 1..=limit.min(-lo) {
            let mut verdicts = Vec::new();
            for b in self.ring.basis(-n)? {
                let v = self.verdict(&b)?;
                growth_below_bound |= v == Verdict::Growth;
                inconclusive += (v == Verdict::Inconclusive) as usize;
                verdicts.push(v);
            }
            checked.push((n, verdicts));
        }
        Ok(Theorem42Report {
            lcm_degree,
            max_ext_dim,
            ext_dims,
            bound,
            vacuous: checked.is_empty(),
            checked,
            growth_below_bound,
            inconclusive,
        })
    }

    /// Multiplies basis classes with degrees in `[lo, hi]` (all negative) in every order,
    /// keeping partial products inside `[lo, hi]` and pruning zeros, to find the longest
    /// nonzero product.
    pub fn nilpotency_scan(&self, lo: i64, hi: i64, max_len: usize, periodicity: &Periodicity) -> Result<NilpotencyReport> {
        let mut report = NilpotencyReport {
            applicable: true,
            reason: None,
            window: (lo, hi),
            bound_i: None,
            radical_nilpotence: None,
            max_nonzero_length: 0,
            witness: vec![],
            witness_coords: vec![],
            products_by_length: vec![],
            theoretical_bound: None,
            within_bound: None,
        };
        if !matches!(periodicity, Periodicity::NotPeriodic { .. }) {
            report.applicable = false;
            report.reason = Some(format!("the nilpotency theorems need a module that is neither projective nor periodic; found {periodicity:?}"));
            return Ok(report);
        }
        let mut factors = Vec::new();
        for n in lo..=hi {
            for (i, b) in self.ring.basis(n)?.into_iter().enumerate() {
                factors.push(((n, i), b));
            }
        }
        // partial products keyed by value, each with one witness factorization
        let mut level: BTreeMap<(i64, Vec<u8>), Vec<(i64, usize)>> = BTreeMap::new();
        for (key, b) in &factors {
            level.entry((b.degree, b.coords.clone())).or_insert_with(|| vec![*key]);
        }
        let mut len = 1;
        let mut last = level.clone();
        report.products_by_length.push(level.len());
        while !level.is_empty() && len < max_len {
            let mut next: BTreeMap<(i64, Vec<u8>), Vec<(i64, usize)>> = BTreeMap::new();
            for ((deg, coords), wit) in &level {
                let a = Class { degree: *deg, coords: coords.clone() };
                for (key, b) in &factors {
                    if deg + b.degree < lo {
                        continue;
                    }
                    let c = self.ring.multiply(&a, b)?;
                    if !c.is_zero() {
                        next.entry((c.degree, c.coords)).or_insert_with(|| {
                            let mut w = wit.clone();
                            w.push(*key);
                            w
                        });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            len += 1;
            report.products_by_length.push(next.len());
            last = next.clone();
            level = next;
        }
        report.max_nonzero_length = if last.is_empty() { 0 } else { len };
        if let Some(((_, coords), wit)) = last.iter().next() {
            report.witness = wit.clone();
            report.witness_coords = coords.clone();
        }
        let n = self.radical_nilpotence()?.nilpotence;
        let b = self.bound_i()?;
        report.radical_nilpotence = Some(n);
        report.bound_i = b;
        // with no nonzero I^n in the window the bound is taken at B_I = 0
        let bi = b.unwrap_or(0).max(0);
        let bound = 2 * (n as i64 + 1) * (bi + 1);
        report.theoretical_bound = Some(bound);
        report.within_bound = Some(report.max_nonzero_length as i64 <= bound);
        Ok(report)
    }
}

/// One degree of an ideal scan.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdealRow {
    pub degree: i64,
    pub dim: usize,
    pub dim_i: usize,
    pub i_stabilized: bool,
    pub dim_j: usize,
    pub j_exact: bool,
    pub dim_streak: usize,
    pub streak_stabilized_at: Option<i64>,
    /// `I ⊆ 𝔍 ⊆ J` as subspaces, when `I` is stabilized, `J` exact and `𝔍` stabilized
    pub nested: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealScan {
    pub schema: u32,
    pub window: (i64, i64),
    pub rows: Vec<IdealRow>,
    /// products `x·y` of a basis class of the ideal with a basis class of degree ±1 that were
    /// checked to stay in the ideal, and the number that did not
    pub closure_checked: usize,
    pub closure_failures: Vec<String>,
}

impl Analyzer {
    /// `I^n`, `J^n` and the streak ideal for every `n` in `range`, with the ideal property
    /// sampled against `Ê^{-1}` and `Ê^1` on both sides.
    pub fn ideal_scan(&self, range: (i64, i64), budget: usize) -> Result<IdealScan> {
        let (lo, hi) = self.degree_range();
        let (a, b) = (range.0.max(lo), range.1.min(hi));
        let mut rows = Vec::new();
        let mut js = BTreeMap::new();
        for n in a..=b {
            let i = self.ideal_i(n)?;
            let j = self.ideal_j(n, budget)?;
            let s = self.streak(n)?;
            let nested = (i.stabilized && j.exact && s.stabilized_at.is_some())
                .then(|| s.space.contains_subspace(&i.space) && j.space.contains_subspace(&s.space));
            rows.push(IdealRow {
                degree: n,
                dim: self.ring.dim(n)?,
                dim_i: i.dim(),
                i_stabilized: i.stabilized,
                dim_j: j.space.dim(),
                j_exact: j.exact,
                dim_streak: s.space.dim(),
                streak_stabilized_at: s.stabilized_at,
                nested,
            });
            js.insert(n, (i, j));
        }
        let mut checked = 0;
        let mut failures = Vec::new();
        for n in a..=b {
            for e in [-1i64, 1] {
                let t = n + e;
                let (Some((i0, j0)), Some((i1, j1))) = (js.get(&n), js.get(&t)) else { continue };
                if !(lo..=hi).contains(&e) {
                    continue;
                }
                let others = self.ring.basis(e)?;
                for (name, src, dst, trusted) in [
                    ("I", &i0.space, &i1.space, i0.stabilized && i1.stabilized),
                    ("J", &j0.space, &j1.space, j0.exact && j1.exact),
                ] {
                    if !trusted {
                        continue;
                    }
                    for v in src.vectors() {
                        let x = Class { degree: n, coords: v };
                        for y in &others {
                            for prod in [self.ring.multiply(&x, y)?, self.ring.multiply(y, &x)?] {
                                checked += 1;
                                if !dst.contains(&prod.coords) {
                                    failures.push(format!("{name}^{n} times a class of degree {e} leaves {name}^{t}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        failures.sort();
        failures.dedup();
        Ok(IdealScan { schema: REPORT_SCHEMA, window: (lo - 1, hi + 1), rows, closure_checked: checked, closure_failures: failures })
    }
}

/// Decides whether `M` is projective, or periodic with period at most `max_period`, by
/// comparing the syzygies `Ω^n M` with `M`.
pub fn periodicity_check(m: &ModuleRep, max_period: usize, seed: u64) -> Result<Periodicity> {
    let g = m.algebra().dim();
    if m.dim() == 0 || (m.free_summand_rank() * g == m.dim()) {
        return Ok(Periodicity::Projective);
    }
    if m.free_summand_rank() > 0 {
        return Err(Error::ProjectiveSummand(m.free_summand_rank()));
    }
    let mut dims = vec![m.dim()];
    let mut om = m.clone();
    for n in 1..=max_period {
        om = syzygy(&om);
        dims.push(om.dim());
        if om.dim() == m.dim() && find_isomorphism(&om, m, seed, 256)?.is_some() {
            return Ok(Periodicity::Periodic { period: n });
        }
    }
    let strictly_growing = dims.windows(2).skip(1).all(|w| w[1] > w[0]);
    Ok(Periodicity::NotPeriodic { syzygy_dims: dims, strictly_growing })
}

/// Dedupes a list of classes by value.
pub fn distinct(classes: &[Class]) -> Vec<Class> {
    let mut seen = BTreeSet::new();
    classes.iter().filter(|c| seen.insert((c.degree, c.coords.clone()))).cloned().collect()
}
