//! Every entry of the golden manifest, recomputed.

use serde_json::{json, Value};

use tatecoh::algebra::{AlgebraSpec, ModuleRep};
use tatecoh::analysis::{periodicity_check, Analyzer, Periodicity};
use tatecoh::catalog::{self, HReading};
use tatecoh::resolution::syzygy;
use tatecoh::tate::TateRing;
use tatecoh::{corpus, reproduce};

fn trivial(r: usize) -> ModuleRep {
    ModuleRep::trivial(&AlgebraSpec::with_rank(2, r).unwrap())
}

fn compute(module: &str, quantity: &str) -> Value {
    let m = || corpus::load(module).unwrap();
    let analyzer = || Analyzer::new(&m(), -8, 8).unwrap();
    match quantity {
        "dim" => json!(m().dim()),
        "relations" => json!(corpus::presentation(module).unwrap().relations.len()),
        "ext_dims_-5..5" => {
            let ring = TateRing::new(&m(), -6, 6).unwrap();
            json!((-5..=5).map(|n| ring.dim(n).unwrap()).collect::<Vec<_>>())
        }
        "syzygy_dims_0..6" => {
            let mut x = m();
            let mut dims = vec![x.dim()];
            for _ in 0..6 {
                x = syzygy(&x);
                dims.push(x.dim());
            }
            json!(dims)
        }
        "radical_nilpotence" if module == "k" => {
            let n: Vec<usize> =
                (1..=3).map(|r| Analyzer::new(&trivial(r), -3, 3).unwrap().radical_nilpotence().unwrap().nilpotence).collect();
            assert!(n.iter().all(|&x| x == n[0]));
            json!(n[0])
        }
        "radical_nilpotence" => json!(analyzer().radical_nilpotence().unwrap().nilpotence),
        "largest_degree_with_nonzero_I" => json!(analyzer().bound_i().unwrap()),
        "longest_nonzero_negative_product_-6..-1" => {
            let per = periodicity_check(&m(), 6, 0).unwrap();
            json!(analyzer().nilpotency_scan(-6, -1, 64, &per).unwrap().max_nonzero_length)
        }
        "theorem_bound_l" => json!(analyzer().theorem42_check(8).unwrap().lcm_degree),
        "theorem_bound_d" => json!(analyzer().theorem42_check(8).unwrap().max_ext_dim),
        "dim_J_over_I" => {
            let an = analyzer();
            let quotients: Vec<usize> = (-7..=3)
                .map(|n| {
                    let j = an.ideal_j(n, 4096).unwrap();
                    assert!(j.exact, "J^{n} is not exact");
                    j.space.dim() - an.ideal_i(n).unwrap().dim()
                })
                .collect();
            assert!(quotients.iter().all(|&q| q == quotients[0]), "{quotients:?}");
            json!(quotients[0])
        }
        "alpha_annihilator" => {
            let an = analyzer();
            let a = catalog::periodic::alpha(an.model(), -4).unwrap();
            let class = an.comparison().end_to_ring(an.ring(), -4, &a).unwrap();
            json!(an.orbit_growth(&class, an.max_steps(-4)).unwrap().ann_generators)
        }
        "alpha_nonzero_and_zeta_shift_-6..5" => json!(reproduce::periodic((-8, 8), (-6, 5), None).unwrap().passed()),
        "alpha_nonzero_and_zeta_shift_-2..2" => {
            let p = if module == "odd-p3" { 3 } else { 5 };
            json!(reproduce::odd(p, (-8, 8), (-2, 2), None).unwrap().passed())
        }
        "alpha_cocycle_needs_minus_h" => {
            let an = Analyzer::new(&m(), -6, 6).unwrap();
            let model = an.model();
            let coh = model.cohomology();
            let mm = model.module();
            let (f, g, h) = (
                catalog::odd::f(mm).unwrap(),
                catalog::odd::g(mm).unwrap(),
                catalog::odd::h(mm, HReading::Y2v).unwrap(),
            );
            let n = -1;
            let deg = 2 * n - 1;
            let plus = model.cochain(deg, &[(&[deg, -1], &f), (&[2 * n, -2], &g), (&[2 * n + 1, -3], &h)]).unwrap();
            let minus = catalog::odd::alpha(model, n, HReading::Y2v).unwrap();
            json!(coh.is_cocycle(deg, &minus).unwrap() && !coh.is_cocycle(deg, &plus).unwrap())
        }
        "betas_cohomologous" => {
            let rep = reproduce::growth((-8, 8), 1, None).unwrap();
            json!(rep.checks.iter().find(|c| c.name == "β1 and β2 are cohomologous").unwrap().passed)
        }
        "gamma_hilbert_0..8" => json!(reproduce::growth((-8, 8), 1, None).unwrap().growth.unwrap().hilbert),
        "gamma_verdict" => json!(reproduce::growth((-8, 8), 1, None).unwrap().growth.unwrap().verdict),
        "periodicity" => match periodicity_check(&trivial(1), 6, 0).unwrap() {
            Periodicity::Periodic { period } => json!(period),
            other => panic!("{other:?}"),
        },
        _ => panic!("no computation for {module} / {quantity}"),
    }
}

#[test]
fn manifest_values_are_reproduced() {
    let manifest: Value = serde_json::from_str(corpus::MANIFEST).unwrap();
    let tags = manifest["tags"].as_object().unwrap();
    let entries = manifest["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    let mut mismatches = vec![];
    for e in entries {
        let (module, quantity) = (e["module"].as_str().unwrap(), e["quantity"].as_str().unwrap());
        assert!(tags.contains_key(e["tag"].as_str().unwrap()), "unknown tag on {module} / {quantity}");
        let got = compute(module, quantity);
        if got != e["value"] {
            mismatches.push(format!("{module} / {quantity}: manifest {}, computed {got}", e["value"]));
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}
