//! Brute-force cross-checks for the closed forms.
//!
//! The grid minimizers evaluate the efficiency ratio `fair / utilitarian`
//! of a budget instance directly from its costs, with their own knapsack
//! and fair-total arithmetic, so they share no code with [`crate::allocation`]
//! or [`crate::bounds`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Allocation, BudgetUtilitySet, UtilityLimits};
use crate::error::{PofError, Result};

/// Threshold for a sampled ratio to count as lexicographically better.
pub const LEX_TOL: f64 = 1e-9;

const MIN_COARSE_STEPS: usize = 50;
const SHRINK: f64 = 10.0;

/// Fractional-knapsack optimum for costs `c` and limits `l`.
fn knapsack_total(c: &[f64], l: &[f64]) -> f64 {
    let mut idx: Vec<usize> = (0..c.len()).collect();
    idx.sort_by(|&a, &b| c[a].total_cmp(&c[b]));
    let mut budget = 1.0;
    let mut total = 0.0;
    for i in idx {
        let need = c[i] * l[i];
        if need <= budget {
            budget -= need;
            total += l[i];
        } else {
            total += budget / c[i];
            break;
        }
    }
    total
}

/// `sum_i 1/(n c_i)` over the knapsack optimum. Valid on the box
/// `1/(n L_i) <= c_i <= 1/L_i`, where the proportional-fair point is
/// `u_i = 1/(n c_i)`.
fn pf_ratio(c: &[f64], l: &[f64]) -> f64 {
    let n = c.len() as f64;
    let fair: f64 = c.iter().map(|ci| 1.0 / (n * ci)).sum();
    fair / knapsack_total(c, l)
}

/// Max-min total over the knapsack optimum, with the split index
/// `l` found by enumerating every candidate against the prefix conditions
/// `sum_{i<=l} c L <= 1 < sum_{i<=l+1} c L` in ascending-cost order.
fn mmf_ratio(c: &[f64], l: &[f64]) -> f64 {
    let n = c.len();
    let full: f64 = c.iter().zip(l).map(|(c, l)| c * l).sum();
    if full <= 1.0 {
        return 1.0;
    }
    let fair: f64 = c
        .iter()
        .zip(l)
        .map(|(&ci, &li)| if ci > 0.0 { li / full } else { li })
        .sum();

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| c[a].total_cmp(&c[b]));
    let spend_prefix = |k: usize| -> f64 { idx[..k].iter().map(|&i| c[i] * l[i]).sum() };
    let util_prefix = |k: usize| -> f64 { idx[..k].iter().map(|&i| l[i]).sum() };

    let mut best = f64::INFINITY;
    for split in 0..n {
        let s = spend_prefix(split);
        if s <= 1.0 && spend_prefix(split + 1) > 1.0 {
            let next = c[idx[split]];
            let util = util_prefix(split) + (1.0 - s) / next;
            best = best.min(fair / util);
        }
    }
    best
}

/// Exhaustive grid over the box `[lo_i, hi_i]` with `steps` points per
/// coordinate, followed by `rounds` refinements that shrink the box around
/// the incumbent by 10x per coordinate. Ties keep the lexicographically
/// smallest point.
fn grid_minimize(
    lo: &[f64],
    hi: &[f64],
    steps: usize,
    rounds: usize,
    f: impl Fn(&[f64]) -> f64,
) -> (f64, Vec<f64>) {
    let n = lo.len();
    let mut box_lo = lo.to_vec();
    let mut box_hi = hi.to_vec();
    let mut best = f64::INFINITY;
    let mut best_c = lo.to_vec();
    let mut width: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| b - a).collect();

    for round in 0..=rounds {
        if round > 0 {
            for i in 0..n {
                width[i] /= SHRINK;
                box_lo[i] = (best_c[i] - width[i] / 2.0).max(lo[i]);
                box_hi[i] = (best_c[i] + width[i] / 2.0).min(hi[i]);
            }
        }
        let mut counter = vec![0usize; n];
        let mut c = vec![0.0; n];
        'grid: loop {
            for i in 0..n {
                let t = counter[i] as f64 / (steps - 1) as f64;
                c[i] = box_lo[i] + t * (box_hi[i] - box_lo[i]);
            }
            let v = f(&c);
            if v < best {
                best = v;
                best_c.copy_from_slice(&c);
            }
            // odometer, last coordinate fastest
            for i in (0..n).rev() {
                counter[i] += 1;
                if counter[i] < steps {
                    continue 'grid;
                }
                counter[i] = 0;
            }
            break;
        }
    }
    (best, best_c)
}

fn check_grid_args(limits: &UtilityLimits, coarse_steps: usize) -> Result<()> {
    let n = limits.len();
    if !(2..=3).contains(&n) {
        return Err(PofError::UnsupportedN(n));
    }
    if coarse_steps < MIN_COARSE_STEPS {
        return Err(PofError::InvalidParams(format!(
            "coarse_steps must be at least {MIN_COARSE_STEPS}, got {coarse_steps}"
        )));
    }
    Ok(())
}

/// Grid estimate of the price-of-PF bound: `1 - min_c pf_ratio(c)` over
/// `1/(n L_i) <= c_i <= 1/L_i`. Returns the estimate and the minimizing costs.
pub fn grid_min_pf_bound_with_argmin(
    limits: &UtilityLimits,
    coarse_steps: usize,
    refine_rounds: usize,
) -> Result<(f64, Vec<f64>)> {
    check_grid_args(limits, coarse_steps)?;
    let l = limits.values();
    let n = l.len() as f64;
    let lo: Vec<f64> = l.iter().map(|li| 1.0 / (n * li)).collect();
    let hi: Vec<f64> = l.iter().map(|li| 1.0 / li).collect();
    let (best, c) = grid_minimize(&lo, &hi, coarse_steps, refine_rounds, |c| pf_ratio(c, l));
    Ok((1.0 - best, c))
}

pub fn grid_min_pf_bound(
    limits: &UtilityLimits,
    coarse_steps: usize,
    refine_rounds: usize,
) -> Result<f64> {
    grid_min_pf_bound_with_argmin(limits, coarse_steps, refine_rounds).map(|(b, _)| b)
}

/// Grid estimate of the price-of-MMF bound: `1 - min_c mmf_ratio(c)` over
/// `0 <= c_i <= 1/L_i`.
pub fn grid_min_mmf_bound_with_argmin(
    limits: &UtilityLimits,
    coarse_steps: usize,
    refine_rounds: usize,
) -> Result<(f64, Vec<f64>)> {
    check_grid_args(limits, coarse_steps)?;
    let l = limits.values();
    let lo = vec![0.0; l.len()];
    let hi: Vec<f64> = l.iter().map(|li| 1.0 / li).collect();
    let (best, c) = grid_minimize(&lo, &hi, coarse_steps, refine_rounds, |c| mmf_ratio(c, l));
    Ok((1.0 - best, c))
}

pub fn grid_min_mmf_bound(
    limits: &UtilityLimits,
    coarse_steps: usize,
    refine_rounds: usize,
) -> Result<f64> {
    grid_min_mmf_bound_with_argmin(limits, coarse_steps, refine_rounds).map(|(b, _)| b)
}

fn shrink_into_budget(set: &BudgetUtilitySet, u: &mut [f64]) {
    for _ in 0..8 {
        let s = set.spend(u);
        if s <= 1.0 {
            return;
        }
        for x in u.iter_mut() {
            *x /= s;
        }
    }
    while set.spend(u) > 1.0 {
        for x in u.iter_mut() {
            *x = x.next_down().max(0.0);
        }
    }
}

/// Deterministic sample of feasible points.
///
/// Each point starts uniform in the box and is scaled back onto the budget
/// when it overspends. With probability 0.3 the point is instead pushed to
/// the boundary: scaled up until a face binds, then topped up in random
/// player order until the budget binds or the box is exhausted.
pub fn random_feasible_points(set: &BudgetUtilitySet, count: usize, seed: u64) -> Vec<Allocation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limits = set.limits().values();
    let costs = set.costs();
    let n = set.len();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut u: Vec<f64> = limits.iter().map(|&l| rng.random::<f64>() * l).collect();
        shrink_into_budget(set, &mut u);

        if rng.random::<f64>() < 0.3 {
            let s = set.spend(&u);
            let mut t = if s > 0.0 { 1.0 / s } else { f64::INFINITY };
            for (&ui, &li) in u.iter().zip(limits) {
                if ui > 0.0 {
                    t = t.min(li / ui);
                }
            }
            if t.is_finite() {
                for (ui, &li) in u.iter_mut().zip(limits) {
                    *ui = (*ui * t).min(li);
                }
            }
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i);
                order.swap(i, j);
            }
            for i in order {
                let left = 1.0 - set.spend(&u);
                if left <= 0.0 {
                    break;
                }
                let room = limits[i] - u[i];
                u[i] += if costs[i] > 0.0 { room.min(left / costs[i]) } else { room };
            }
            shrink_into_budget(set, &mut u);
        }
        for (ui, &li) in u.iter_mut().zip(limits) {
            *ui = ui.clamp(0.0, li);
        }
        out.push(Allocation::new(u));
    }
    out
}

/// Lexicographic comparison of ascending ratio vectors: `true` when
/// `other` beats `reference` by more than `tol` at the first component where
/// they differ by more than `tol`.
pub fn lex_exceeds(other: &[f64], reference: &[f64], tol: f64) -> bool {
    for (o, r) in other.iter().zip(reference) {
        if (o - r).abs() > tol {
            return o > r;
        }
    }
    false
}

/// Falsification test for max-min optimality: `true` when no sampled
/// feasible point has a lexicographically larger sorted ratio vector.
pub fn lex_dominance_check(
    set: &BudgetUtilitySet,
    candidate: &Allocation,
    trials: usize,
    seed: u64,
) -> bool {
    let reference = candidate.sorted_ratios(set.limits());
    random_feasible_points(set, trials, seed)
        .iter()
        .all(|p| !lex_exceeds(&p.sorted_ratios(set.limits()), &reference, LEX_TOL))
}
