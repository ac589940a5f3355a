//! Acceptance criteria. Each test prints one PASS/FAIL line.
//!
//! Run with `cargo test -p pof --test acceptance -- --nocapture --test-threads 1`
//! to see the report.

mod common;

use std::time::{Duration, Instant};

use pof::allocation::{compute_pof, solve_mmf, solve_pf_closed_form, solve_pf_waterfill, DEFAULT_TOL};
use pof::bounds::{
    bft_mmf_bound_equal, bft_pf_bound_equal, delta_improvement, mmf_bound_unequal, pf_bound_equal,
    pf_bound_unequal,
};
use pof::experiments::{n2_limit_sweep, rows_to_csv, variance_sensitivity, VarianceParams};
use pof::oracle::{grid_min_mmf_bound, grid_min_pf_bound, lex_dominance_check, random_feasible_points};
use pof::worstcase::verify_tightness;
use pof::{Criterion, UtilityLimits};

struct Checks {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    started: Instant,
}

impl Checks {
    fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            failures: Vec::new(),
            started: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn runtime_below(&mut self, limit: Duration) {
        let took = self.started.elapsed();
        self.check(took < limit, || format!("runtime {took:?} exceeds {limit:?}"));
    }

    fn finish(self) {
        let took = self.started.elapsed();
        if self.failures.is_empty() {
            println!("[PASS] AC{} {} ({took:.2?})", self.id, self.title);
        } else {
            println!("[FAIL] AC{} {} ({took:.2?})", self.id, self.title);
            for f in &self.failures {
                println!("       - {f}");
            }
            panic!("AC{} failed: {:?}", self.id, self.failures);
        }
    }
}

#[test]
fn ac1_equal_pf_anchors() {
    let mut c = Checks::new(1, "equal-limit PF bound anchors");
    let b2 = pf_bound_equal(2).unwrap().bound;
    let expected = (2.0 - 3f64.sqrt()) / 4.0;
    c.check((b2 - expected).abs() <= 1e-12, || format!("n=2: {b2} vs {expected}"));
    c.check((b2 - 0.067).abs() < 5e-4, || format!("n=2 not ~6.7%: {b2}"));
    for n in [4usize, 9, 16, 25] {
        let b = pf_bound_equal(n).unwrap().bound;
        let nf = n as f64;
        let e = 1.0 - (2.0 * nf.sqrt() - 1.0) / nf;
        c.check((b - e).abs() <= 1e-12, || format!("n={n}: {b} vs {e}"));
    }
    c.runtime_below(Duration::from_millis(1));
    c.finish();
}

#[test]
fn ac2_comparators() {
    let mut c = Checks::new(2, "earlier equal-case bounds");
    let pf = bft_pf_bound_equal(2).unwrap();
    c.check((pf - 0.085_786).abs() <= 1e-6, || format!("PF n=2: {pf}"));
    c.check((pf - 0.086).abs() < 5e-4, || format!("PF n=2 not ~8.6%: {pf}"));
    let mmf = bft_mmf_bound_equal(9).unwrap();
    c.check((mmf - 0.64).abs() <= 1e-12, || format!("MMF n=9: {mmf}"));
    c.finish();
}

#[test]
fn ac3_delta_shape() {
    let mut c = Checks::new(3, "relative improvement delta(n)");
    let delta: Vec<f64> = (2..=50).map(|n| delta_improvement(n).unwrap()).collect();
    let d = |n: usize| delta[n - 2];
    let maxima: Vec<usize> = (2..=49)
        .filter(|&n| (n == 2 || d(n) > d(n - 1)) && d(n) > d(n + 1))
        .collect();
    c.check(maxima == vec![2, 6, 12, 20, 30, 42], || format!("local maxima {maxima:?}"));
    for a in 2..=7usize {
        let n = a * a;
        c.check(d(n) == 0.0, || format!("delta({n}) = {}", d(n)));
    }
    c.check((d(2) - 0.219).abs() <= 5e-3, || format!("delta(2) = {}", d(2)));
    c.runtime_below(Duration::from_millis(10));
    c.finish();
}

#[test]
fn ac4_tightness_end_to_end() {
    let mut c = Checks::new(4, "worst-case instances attain the bounds (tol 1e-8)");
    let mut rng = common::rng(2024);
    let mut worst = (0.0f64, String::new());
    for n in 2..=12 {
        for _ in 0..200 {
            let limits = common::random_limits(n, &mut rng);
            for criterion in [Criterion::Pf, Criterion::Mmf] {
                match verify_tightness(&limits, criterion, 1e-8) {
                    Ok(r) => {
                        if r.gap > worst.0 {
                            worst = (r.gap, format!("{criterion} {:?}", limits.values()));
                        }
                        c.check(r.pass, || {
                            format!(
                                "{criterion} n={n} L={:?}: bound {} achieved {} ({:?})",
                                limits.values(),
                                r.bound,
                                r.achieved_pof,
                                r.case_tag
                            )
                        });
                    }
                    Err(e) => c.check(false, || format!("{criterion} L={:?}: {e}", limits.values())),
                }
            }
        }
    }
    println!("       largest gap {:.3e} at {}", worst.0, worst.1);
    c.runtime_below(Duration::from_secs(30));
    c.finish();
}

#[test]
fn ac5_equal_case_reductions() {
    let mut c = Checks::new(5, "unequal bounds reduce to equal-case formulas");
    for n in 2..=100 {
        let l = UtilityLimits::equal(n).unwrap();
        let pf = pf_bound_unequal(&l).unwrap().bound;
        let eq = pf_bound_equal(n).unwrap().bound;
        c.check((pf - eq).abs() <= 1e-12, || format!("PF n={n}: {pf} vs {eq}"));
        let mmf = mmf_bound_unequal(&l).unwrap().bound;
        let nf = n as f64;
        let e = 1.0 - 4.0 * nf / ((nf + 1.0) * (nf + 1.0));
        c.check((mmf - e).abs() <= 1e-12, || format!("MMF n={n}: {mmf} vs {e}"));
    }
    c.finish();
}

#[test]
fn ac6_grid_oracle_equivalence() {
    let mut c = Checks::new(6, "grid oracle matches closed-form bounds (tol 1e-3)");
    let mut rng = common::rng(66);
    for n in [2usize, 3] {
        for _ in 0..20 {
            let l = common::random_limits(n, &mut rng);
            let pf_grid = grid_min_pf_bound(&l, 50, 3).unwrap();
            let pf = pf_bound_unequal(&l).unwrap().bound;
            c.check((pf_grid - pf).abs() <= 1e-3, || format!("PF L={:?}: grid {pf_grid} formula {pf}", l.values()));
            c.check(pf_grid <= pf + 1e-9, || format!("PF grid beats formula at L={:?}", l.values()));
            let mmf_grid = grid_min_mmf_bound(&l, 50, 3).unwrap();
            let mmf = mmf_bound_unequal(&l).unwrap().bound;
            c.check((mmf_grid - mmf).abs() <= 1e-3, || {
                format!("MMF L={:?}: grid {mmf_grid} formula {mmf}", l.values())
            });
            c.check(mmf_grid <= mmf + 1e-9, || format!("MMF grid beats formula at L={:?}", l.values()));
        }
    }
    let l = UtilityLimits::new(vec![1.0, 0.25]).unwrap();
    for (name, formula, grid) in [
        ("PF", pf_bound_unequal(&l).unwrap().bound, grid_min_pf_bound(&l, 50, 3).unwrap()),
        ("MMF", mmf_bound_unequal(&l).unwrap().bound, grid_min_mmf_bound(&l, 50, 3).unwrap()),
    ] {
        c.check((formula - 0.375).abs() <= 1e-12, || format!("{name} formula {formula}"));
        c.check((grid - 0.375).abs() <= 1e-3, || format!("{name} grid {grid}"));
    }
    c.runtime_below(Duration::from_secs(60));
    c.finish();
}

#[test]
fn ac7_supremum_ceiling() {
    let mut c = Checks::new(7, "bounds stay strictly below 1 - 1/n and approach it");
    let mut rng = common::rng(77);
    for n in 2..=12usize {
        let sup = 1.0 - 1.0 / n as f64;
        for _ in 0..500 {
            let l = common::random_limits(n, &mut rng);
            let pf = pf_bound_unequal(&l).unwrap().bound;
            let mmf = mmf_bound_unequal(&l).unwrap().bound;
            c.check(pf < sup, || format!("PF {pf} >= {sup} at {:?}", l.values()));
            c.check(mmf < sup, || format!("MMF {mmf} >= {sup} at {:?}", l.values()));
        }
        let mut extreme = vec![1e-6; n];
        extreme[0] = 1.0;
        let l = UtilityLimits::new(extreme).unwrap();
        let pf = pf_bound_unequal(&l).unwrap().bound;
        let mmf = mmf_bound_unequal(&l).unwrap().bound;
        c.check((pf - sup).abs() <= 1e-4 && pf < sup, || format!("PF n={n}: {pf} vs {sup}"));
        c.check((mmf - sup).abs() <= 1e-4 && mmf < sup, || format!("MMF n={n}: {mmf} vs {sup}"));
    }
    let rows = n2_limit_sweep(&[1.0, 1e-6]).unwrap();
    let at_one = rows[0].get("our_bound").unwrap();
    let near_zero = rows[1].get("our_bound").unwrap();
    c.check((at_one - 0.06699).abs() < 1e-5, || format!("L2=1: {at_one}"));
    c.check((near_zero - 0.5).abs() < 1e-4, || format!("L2=1e-6: {near_zero}"));
    c.finish();
}

#[test]
fn ac8_solver_optimality() {
    let mut c = Checks::new(8, "PF first-order condition, MMF lex optimality, closed form = water-filling");
    let mut rng = common::rng(88);
    let mut closed_form_hits = 0;
    for k in 0..50u64 {
        let n = 2 + (k as usize % 7);
        let set = common::random_instance(n, &mut rng);
        let points = random_feasible_points(&set, 10_000, 1000 + k);

        let pf = solve_pf_waterfill(&set, DEFAULT_TOL).unwrap();
        let worst = points
            .iter()
            .map(|p| {
                p.utilities()
                    .iter()
                    .zip(pf.utilities())
                    .map(|(u, v)| (u - v) / v)
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        c.check(worst <= 1e-7, || format!("instance {k}: PF condition {worst:e}"));

        let mmf = solve_mmf(&set);
        c.check(lex_dominance_check(&set, &mmf, 10_000, 2000 + k), || {
            format!("instance {k}: MMF lex-dominated")
        });

        if let Some(cf) = solve_pf_closed_form(&set) {
            closed_form_hits += 1;
            let diff = cf
                .utilities()
                .iter()
                .zip(pf.utilities())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            c.check(diff <= 1e-8, || format!("instance {k}: closed form differs by {diff:e}"));
        }
    }
    // Instances where the closed form applies, built from worst-case constructions.
    for n in 2..=12 {
        let l = common::random_limits(n, &mut rng);
        let set = pof::worstcase::construct_pf_worstcase_unequal(&l).unwrap();
        let pf = solve_pf_waterfill(&set, DEFAULT_TOL).unwrap();
        match solve_pf_closed_form(&set) {
            Some(cf) => {
                closed_form_hits += 1;
                let diff = cf
                    .utilities()
                    .iter()
                    .zip(pf.utilities())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                c.check(diff <= 1e-8, || format!("worst case n={n}: closed form differs by {diff:e}"));
            }
            None => c.check(false, || format!("closed form not applicable on worst case {:?}", l.values())),
        }
    }
    println!("       closed form applicable on {closed_form_hits} instances");
    c.check(closed_form_hits > 11, || "too few closed-form instances".into());
    c.finish();
}

#[test]
fn ac9_variance_sensitivity_anchors() {
    let mut c = Checks::new(9, "variance sweep anchors, determinism and ceiling");
    let params = VarianceParams {
        criterion: Criterion::Pf,
        n: 9,
        sigma_step: 0.01,
        steps: 100,
        draws_per_sigma: 1,
        seed: 42,
    };
    for (criterion, anchor) in [(Criterion::Pf, 4.0 / 9.0), (Criterion::Mmf, 0.64)] {
        let p = VarianceParams { criterion, ..params };
        let rows = variance_sensitivity(p).unwrap();
        c.check(rows.len() == 100, || format!("{criterion}: {} rows", rows.len()));
        let first = rows[0].get("our_bound").unwrap();
        c.check((first - anchor).abs() <= 1e-12, || format!("{criterion} sigma=0: {first}"));
        let eq = match criterion {
            Criterion::Pf => pf_bound_equal(9).unwrap().bound,
            Criterion::Mmf => bft_mmf_bound_equal(9).unwrap(),
        };
        c.check((first - eq).abs() <= 1e-12, || format!("{criterion} sigma=0 vs equal case"));
        for r in &rows {
            let b = r.get("our_bound").unwrap();
            c.check(b < 1.0 - 1.0 / 9.0, || format!("{criterion} row {r:?} above ceiling"));
        }
        let a = rows_to_csv(&rows).unwrap();
        let b = rows_to_csv(&variance_sensitivity(p).unwrap()).unwrap();
        c.check(a == b, || format!("{criterion}: CSV bytes differ across runs"));
        let other = rows_to_csv(&variance_sensitivity(VarianceParams { seed: 43, ..p }).unwrap()).unwrap();
        c.check(a != other, || format!("{criterion}: seed has no effect"));
    }
    c.finish();
}

#[test]
fn ac_pof_matches_bound_on_reference_instances() {
    // Cross-criterion sanity: the two-player instance L = (1, 1/4), c = (1, 4)
    // is the worst case for both fairness notions.
    let set = pof::BudgetUtilitySet::new(vec![1.0, 0.25], vec![1.0, 4.0]).unwrap();
    for criterion in [Criterion::Pf, Criterion::Mmf] {
        let r = compute_pof(&set, criterion).unwrap();
        assert!((r.pof - 0.375).abs() < 1e-12, "{criterion}: {}", r.pof);
    }
}
