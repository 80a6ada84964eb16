//! The ten acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`). Criteria known to be unattainable are still
//! run in full and must FAIL; the process exits nonzero only when an outcome differs from
//! the expectation below.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use tatecoh::algebra::{AlgebraSpec, ModuleRep};
use tatecoh::analysis::{periodicity_check, Analyzer, Periodicity, Verdict};
use tatecoh::resolution::complete_resolution;
use tatecoh::stable::ext_hat;
use tatecoh::tate::{Class, TateRing};
use tatecoh::{corpus, reproduce, Result};

const SEED: u64 = 0x7a7e;

/// Criteria that fail because the claim itself is false, with the reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[
    (
        3,
        "β1 - β2 is the coboundary of the 0-cochain u_{0,1,0} -> (Yu -> Zv), u_{1,0,0} -> (Yv -> Zv); \
         the products of degree >= 3 vanish and the orbit of γ is bounded",
    ),
    (
        5,
        "Tate duality pairs Ê^1 with Ê^-2 nondegenerately, so some positive·negative products landing \
         in negative degrees must be nonzero",
    ),
];

struct Outcome {
    passed: bool,
    detail: String,
    report: Value,
}

fn outcome(passed: bool, detail: impl Into<String>, report: Value) -> Result<Outcome> {
    Ok(Outcome { passed, detail: detail.into(), report })
}

fn trivial(r: usize) -> ModuleRep {
    ModuleRep::trivial(&AlgebraSpec::with_rank(2, r).expect("p = 2"))
}

fn random_class(rng: &mut ChaCha8Rng, ring: &TateRing, n: i64) -> Result<Class> {
    let p = ring.algebra().p();
    let coords = (0..ring.dim(n)?).map(|_| rng.gen_range(0..p) as u8).collect();
    Ok(Class { degree: n, coords })
}

fn reproduction(rep: Result<reproduce::Reproduction>) -> Result<(bool, Vec<String>, Value)> {
    let rep = rep?;
    let failed: Vec<String> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let report = serde_json::to_value(&rep).expect("serializable");
    Ok((rep.passed(), failed, report))
}

fn c1() -> Result<Outcome> {
    let (ok, failed, report) = reproduction(reproduce::periodic((-8, 8), (-6, 5), None))?;
    let n = report["checks"].as_array().map_or(0, Vec::len);
    outcome(ok, format!("{} of {n} checks, n in [-6, 5]; failing: {failed:?}", n - failed.len()), report)
}

fn c2() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = vec![];
    let mut reports = vec![];
    for p in [3, 5] {
        let (pass, failed, report) = reproduction(reproduce::odd(p, (-8, 8), (-2, 2), None))?;
        ok &= pass;
        let n = report["checks"].as_array().map_or(0, Vec::len);
        parts.push(format!("p={p}: {} of {n} checks{}", n - failed.len(), if failed.is_empty() { String::new() } else { format!(", failing {failed:?}") }));
        reports.push(report);
    }
    outcome(ok, parts.join("; "), json!(reports))
}

fn c3() -> Result<Outcome> {
    let (ok, failed, report) = reproduction(reproduce::growth((-8, 8), 4, None))?;
    let n = report["checks"].as_array().map_or(0, Vec::len);
    outcome(ok, format!("{} of {n} checks; failing: {failed:?}", n - failed.len()), report)
}

fn c4() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = true;
    let mut parts = vec![];
    let mut reports = vec![];
    let modules: Vec<(String, ModuleRep)> = vec![
        ("periodic".into(), corpus::periodic_module()),
        ("k r=1".into(), trivial(1)),
        ("k r=2".into(), trivial(2)),
        ("k r=3".into(), trivial(3)),
    ];
    for (name, m) in &modules {
        let an = Analyzer::new(m, -9, 9)?;
        let ring = an.ring();
        let mut rows = vec![];
        let mut good = true;
        for n in -4..=3 {
            let (a, b) = (ring.dim(n)?, ring.dim(-n - 1)?);
            let rank = an.duality_matrix(n)?.rank();
            good &= a == b && rank == a;
            rows.push(json!({"degree": n, "dim": a, "dual_dim": b, "rank": rank}));
        }
        // adjunction <αβ, γ> = <α, βγ> with all three degrees and both products inside [-4, 3]
        let mut triples = 0;
        let mut adjoint = true;
        while triples < 100 {
            let a = rng.gen_range(-4..=3i64);
            let b = rng.gen_range(-4..=3i64);
            let c = -1 - a - b;
            if !(-4..=3).contains(&c) || !(-8..=7).contains(&(a + b)) || !(-8..=7).contains(&(b + c)) {
                continue;
            }
            let (x, y, z) = (random_class(&mut rng, ring, a)?, random_class(&mut rng, ring, b)?, random_class(&mut rng, ring, c)?);
            let left = an.pairing(&ring.multiply(&x, &y)?, &z)?;
            let right = an.pairing(&x, &ring.multiply(&y, &z)?)?;
            adjoint &= left == right;
            triples += 1;
        }
        good &= adjoint;
        ok &= good;
        parts.push(format!("{name}: {}", if good { "ok" } else { "FAILED" }));
        reports.push(json!({"module": name, "degrees": rows, "adjunction_triples": triples, "adjunction": adjoint}));
    }
    outcome(ok, format!("n in [-4, 3], 100 adjunction triples each; {}", parts.join(", ")), json!(reports))
}

fn c5() -> Result<Outcome> {
    let mut neg_ok = true;
    let mut mixed_ok = true;
    let mut parts = vec![];
    let mut reports = vec![];
    for r in [2, 3] {
        let ring = TateRing::new(&trivial(r), -14, 8)?;
        // (products, nonzero) for negative·negative, mixed into degree >= 0, mixed into degree < 0
        let mut counts = [(0usize, 0usize); 3];
        for a in -6..=6i64 {
            for b in -6..=6i64 {
                if a >= 0 && b >= 0 || a == 0 || b == 0 {
                    continue;
                }
                let slot = if a < 0 && b < 0 { 0 } else if a + b >= 0 { 1 } else { 2 };
                for x in ring.basis(a)? {
                    for y in ring.basis(b)? {
                        counts[slot].0 += 1;
                        counts[slot].1 += !ring.multiply(&x, &y)?.is_zero() as usize;
                    }
                }
            }
        }
        neg_ok &= counts[0].1 == 0;
        mixed_ok &= counts[1].1 == 0 && counts[2].1 == 0;
        parts.push(format!(
            "r={r}: neg·neg {}/{} nonzero, mixed into deg>=0 {}/{}, mixed into deg<0 {}/{}",
            counts[0].1, counts[0].0, counts[1].1, counts[1].0, counts[2].1, counts[2].0
        ));
        reports.push(json!({"rank": r, "neg_neg": counts[0], "mixed_nonneg": counts[1], "mixed_neg": counts[2]}));
    }
    outcome(neg_ok && mixed_ok, format!("factors in [-6, 6]; {}", parts.join("; ")), json!(reports))
}

fn c6() -> Result<Outcome> {
    const MAX_LEN: usize = 64;
    let m = corpus::periodic_module();
    let per = periodicity_check(&m, 6, SEED)?;
    let an = Analyzer::new(&m, -8, 8)?;
    let scan = an.nilpotency_scan(-6, -1, MAX_LEN, &per)?;
    let certified = matches!(per, Periodicity::NotPeriodic { strictly_growing: true, .. });
    let terminated = scan.max_nonzero_length < MAX_LEN;
    let within = scan.within_bound == Some(true);

    let k = trivial(1);
    let per_k = periodicity_check(&k, 6, SEED)?;
    let an_k = Analyzer::new(&k, -8, 8)?;
    let scan_k = an_k.nilpotency_scan(-6, -1, MAX_LEN, &per_k)?;
    let inapplicable = matches!(per_k, Periodicity::Periodic { .. }) && !scan_k.applicable;

    outcome(
        certified && terminated && within && inapplicable,
        format!(
            "periodic module: L = {}, N = {:?}, B_I = {:?}, bound {:?}; k (r=1): {:?}, applicable = {}",
            scan.max_nonzero_length, scan.radical_nilpotence, scan.bound_i, scan.theoretical_bound, per_k, scan_k.applicable
        ),
        json!({"periodicity": per, "scan": scan, "trivial_r1": {"periodicity": per_k, "scan": scan_k}}),
    )
}

fn c7() -> Result<Outcome> {
    let an = Analyzer::new(&corpus::periodic_module(), -10, 8)?;
    let t = an.theorem42_check(8)?;
    // with dℓ >= 8 there is nothing to check; the negative degrees are reported anyway
    let mut negative = vec![];
    for n in 1..=8 {
        let verdicts: Vec<Verdict> = an.ring().basis(-n)?.iter().map(|b| an.verdict(b)).collect::<Result<_>>()?;
        negative.push(json!({"degree": -n, "verdicts": verdicts}));
    }
    let passed = !t.growth_below_bound && t.inconclusive == 0;
    outcome(
        passed,
        format!(
            "ℓ = {}, Ext dims {:?}, d = {}, dℓ = {}; {} degrees checked{}",
            t.lcm_degree,
            t.ext_dims,
            t.max_ext_dim,
            t.bound,
            t.checked.len(),
            if t.vacuous { " (vacuous: no n with dℓ < n <= 8)" } else { "" }
        ),
        json!({"theorem": t, "negative_verdicts": negative}),
    )
}

fn c8() -> Result<Outcome> {
    let an = Analyzer::new(&corpus::periodic_module(), -8, 8)?;
    let scan = an.ideal_scan((-7, 7), 4096)?;
    let i_zero = scan.rows.iter().filter(|r| r.degree >= 0 && r.i_stabilized).all(|r| r.dim_i == 0);
    let i_checked: Vec<i64> = scan.rows.iter().filter(|r| r.degree >= 0 && r.i_stabilized).map(|r| r.degree).collect();
    let nested: Vec<i64> = scan.rows.iter().filter(|r| r.nested.is_some()).map(|r| r.degree).collect();
    let nesting = scan.rows.iter().all(|r| r.nested != Some(false));
    let streak_degrees: Vec<i64> = (-6..=4).collect();
    let stabilizes = scan
        .rows
        .iter()
        .filter(|r| streak_degrees.contains(&r.degree))
        .all(|r| r.streak_stabilized_at.is_some());
    let exact: Vec<i64> = scan.rows.iter().filter(|r| r.j_exact && r.degree + an.step() <= 7).map(|r| r.degree).collect();
    let inj = an.select_zeta(&exact, 4096)?;
    let bij = an.streak_bijectivity(&inj.generator, &streak_degrees[..streak_degrees.len() - 1])?;
    let passed = i_zero && !i_checked.is_empty() && nesting && !nested.is_empty() && stabilizes && inj.injective && bij.injective;
    outcome(
        passed,
        format!(
            "I^n = 0 for n in {i_checked:?}; nesting verified in {} degrees; streak stable for n in [-6, 4]; \
             ζ = {:?} injective on J/I for n in {exact:?}: {}; bijective on streak/I: {}; {} closure failures",
            nested.len(),
            inj.generator,
            inj.injective,
            bij.injective,
            scan.closure_failures.len()
        ),
        json!({"scan": scan, "injectivity": inj, "bijectivity": bij}),
    )
}

fn c9() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut ok = true;
    let mut parts = vec![];
    let mut reports = vec![];
    for e in corpus::ENTRIES {
        let m = corpus::load(e.id)?;
        let res = complete_resolution(&m, -7, 7)?;
        let exact = res.verify().is_ok();
        let minimal = res.is_minimal();
        let dd = (res.n_min() + 2..=res.n_max()).all(|n| res.boundary_kmat(n - 1).mul(res.boundary_kmat(n)).is_zero());
        let ring = TateRing::from_complex(std::sync::Arc::new(res))?;
        let mut dims = vec![];
        let mut agree = true;
        for n in -5..=5 {
            let (a, b) = (ring.dim(n)?, ext_hat(ring.complex(), n, &m)?.stable_dim());
            agree &= a == b;
            dims.push((n, a, b));
        }
        let coh = ring.cohomology();
        let p = ring.algebra().p();
        let mut independent = true;
        for _ in 0..50 {
            let (a, b) = (rng.gen_range(-3..=3i64), rng.gen_range(-3..=3i64));
            let (x, y) = (random_class(&mut rng, &ring, a)?, random_class(&mut rng, &ring, b)?);
            let mut perturbed = vec![];
            for c in [&x, &y] {
                let mut rep = ring.cocycle(c)?;
                let dx: Vec<u8> = (0..coh.cochain_dim(c.degree - 1)).map(|_| rng.gen_range(0..p) as u8).collect();
                let shift = coh.delta(c.degree - 1)?.mul_vec(&dx);
                ring.algebra().field().axpy(&mut rep, &shift, 1);
                perturbed.push(rep);
            }
            independent &= ring.multiply_cocycles(a, &perturbed[0], b, &perturbed[1])? == ring.multiply(&x, &y)?;
        }
        let good = exact && minimal && dd && agree && independent;
        ok &= good;
        parts.push(format!("{}: {}", e.id, if good { "ok" } else { "FAILED" }));
        reports.push(json!({
            "module": e.id, "exact": exact, "minimal": minimal, "dd_zero": dd,
            "dims": dims, "cross_engine": agree, "representative_independent": independent,
        }));
    }
    outcome(ok, format!("window [-7, 7], dims for n in [-5, 5], 50 perturbations each; {}", parts.join(", ")), json!(reports))
}

type Criterion = fn() -> Result<Outcome>;
const CRITERIA: [(&str, Criterion); 9] = [
    ("periodic example: α̃_n ζ = α̃_{n+1} != 0", c1),
    ("odd example at p = 3, 5", c2),
    ("growth example", c3),
    ("Tate duality and adjunction", c4),
    ("negative products vanish for M = k", c5),
    ("nilpotency of negative products", c6),
    ("bounded orbits beyond dℓ", c7),
    ("ideal structure I ⊆ 𝔍 ⊆ J", c8),
    ("structural invariants on the corpus", c9),
];

struct Run {
    lines: Vec<(bool, String)>,
    report: Vec<u8>,
}

fn run_suite() -> Run {
    let mut lines = vec![];
    let mut report = vec![];
    for (i, (name, f)) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let (passed, detail, value) = match f() {
            Ok(o) => (o.passed, o.detail, o.report),
            Err(e) => (false, format!("error: {e}"), json!({"error": e.to_string()})),
        };
        lines.push((passed, format!("criterion {}: {} {name} [{:.1?}] {detail}", i + 1, if passed { "PASS" } else { "FAIL" }, t.elapsed())));
        report.push(json!({"criterion": i + 1, "passed": passed, "report": value}));
    }
    Run { lines, report: serde_json::to_vec_pretty(&report).expect("serializable") }
}

fn main() {
    let first = run_suite();
    let second = run_suite();
    let identical = first.report == second.report;
    let mut lines = first.lines;
    lines.push((identical, format!("criterion 10: {} determinism: {} report bytes, identical across two runs: {identical}", if identical { "PASS" } else { "FAIL" }, first.report.len())));
    if let Ok(dir) = std::env::var("CARGO_TARGET_TMPDIR") {
        let _ = std::fs::write(std::path::Path::new(&dir).join("acceptance-report.json"), &first.report);
    }

    let mut unexpected = 0;
    for (i, (passed, line)) in lines.iter().enumerate() {
        println!("{line}");
        let known = KNOWN_FAILURES.iter().find(|(c, _)| *c == i + 1);
        match known {
            Some((_, why)) => {
                println!("    known failure: {why}");
                unexpected += *passed as usize;
            }
            None => unexpected += !*passed as usize,
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria differ from their expected outcome");
        std::process::exit(1);
    }
}
