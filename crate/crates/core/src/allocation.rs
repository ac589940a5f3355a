//! Utilitarian, proportional-fair and max-min fair allocations over a
//! [`BudgetUtilitySet`], and the price of fairness between them.

use serde::Serialize;

use crate::domain::{Allocation, BudgetUtilitySet, Criterion, KnapsackBreakdown};
use crate::error::{PofError, Result};

/// Default residual tolerance for the water-filling bisection.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_BISECTIONS: usize = 200;
// enough doublings/halvings to span the whole f64 exponent range
const MAX_BRACKET_STEPS: usize = 2200;

/// Fractional knapsack: serve players in ascending cost order until the
/// budget runs out; the next player gets the leftover fraction.
pub fn solve_utilitarian(set: &BudgetUtilitySet) -> (Allocation, KnapsackBreakdown) {
    let costs = set.costs();
    let limits = set.limits().values();
    let n = set.len();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]));

    let mut u = vec![0.0; n];
    let mut spent = 0.0;
    let mut split_index = n;
    let mut fraction = 0.0;
    for (pos, &i) in order.iter().enumerate() {
        let need = costs[i] * limits[i];
        if spent + need <= 1.0 {
            spent += need;
            u[i] = limits[i];
        } else {
            split_index = pos;
            fraction = ((1.0 - spent) / need).clamp(0.0, 1.0);
            u[i] = fraction * limits[i];
            break;
        }
    }

    let allocation = Allocation::new(u);
    let breakdown = KnapsackBreakdown {
        order,
        split_index,
        fraction,
        optimal_total: allocation.total(),
    };
    (allocation, breakdown)
}

/// `u_i = 1 / (n c_i)` when that point lies in the box; `None` otherwise.
///
/// The point always spends the budget exactly, so whenever it is inside the
/// box it maximizes `sum log u_i`.
pub fn solve_pf_closed_form(set: &BudgetUtilitySet) -> Option<Allocation> {
    let n = set.len() as f64;
    let mut u = Vec::with_capacity(set.len());
    for (&c, &l) in set.costs().iter().zip(set.limits().values()) {
        if c <= 0.0 {
            return None;
        }
        let ui = 1.0 / (n * c);
        if ui > l {
            return None;
        }
        u.push(ui);
    }
    Some(Allocation::new(u))
}

/// Proportional fairness by KKT water-filling. See
/// [`solve_pf_waterfill_with_level`].
pub fn solve_pf_waterfill(set: &BudgetUtilitySet, tol: f64) -> Result<Allocation> {
    solve_pf_waterfill_with_level(set, tol).map(|(a, _)| a)
}

/// Maximizes `sum log u_i` with `u_i(lambda) = min(L_i, 1 / (lambda c_i))`
/// for positive-cost players and `u_i = L_i` for free ones. The water level
/// `lambda` is bracketed by doubling/halving from 1 and bisected until the
/// budget residual is within `tol`, then snapped to the exact level for the
/// resulting active set. Returns `None` for the level when the whole box is
/// affordable.
pub fn solve_pf_waterfill_with_level(
    set: &BudgetUtilitySet,
    tol: f64,
) -> Result<(Allocation, Option<f64>)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(PofError::InvalidParams(format!("tol must be positive, got {tol}")));
    }
    let limits = set.limits().values();
    let costs = set.costs();
    if set.full_cost() <= 1.0 {
        return Ok((Allocation::new(limits.to_vec()), None));
    }

    let fill = |lambda: f64| -> Vec<f64> {
        costs
            .iter()
            .zip(limits)
            .map(|(&c, &l)| if c > 0.0 { l.min(1.0 / (lambda * c)) } else { l })
            .collect()
    };
    let residual = |lambda: f64| set.spend(&fill(lambda)) - 1.0;

    // residual is continuous and strictly decreasing in lambda
    let mut lo = 1.0_f64;
    let mut hi = 1.0_f64;
    let mut bracketed = false;
    if residual(1.0) > 0.0 {
        for _ in 0..MAX_BRACKET_STEPS {
            hi *= 2.0;
            if residual(hi) <= 0.0 {
                lo = hi / 2.0;
                bracketed = true;
                break;
            }
        }
    } else {
        for _ in 0..MAX_BRACKET_STEPS {
            lo /= 2.0;
            if residual(lo) > 0.0 {
                hi = lo * 2.0;
                bracketed = true;
                break;
            }
        }
    }
    if !bracketed {
        return Err(PofError::ToleranceNotReached {
            tol,
            residual: f64::INFINITY,
        });
    }

    let mut lambda = 0.5 * (lo + hi);
    let mut r = residual(lambda);
    for _ in 0..MAX_BISECTIONS {
        if r.abs() <= tol {
            break;
        }
        if r > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        lambda = 0.5 * (lo + hi);
        r = residual(lambda);
    }

    // Snap: with the active set fixed, the level solving the budget is explicit.
    let mut free = 0usize;
    let mut capped_spend = 0.0;
    for (&c, &l) in costs.iter().zip(limits) {
        if c > 0.0 {
            if 1.0 / (lambda * c) < l {
                free += 1;
            } else {
                capped_spend += c * l;
            }
        }
    }
    if free > 0 && capped_spend < 1.0 {
        let snapped = free as f64 / (1.0 - capped_spend);
        let rs = residual(snapped);
        if rs.abs() <= r.abs() {
            lambda = snapped;
            r = rs;
        }
    }

    if r.abs() > tol {
        return Err(PofError::ToleranceNotReached { tol, residual: r });
    }
    Ok((Allocation::new(fill(lambda)), Some(lambda)))
}

/// Closed form when it applies, water-filling otherwise.
pub fn solve_pf(set: &BudgetUtilitySet, tol: f64) -> Result<Allocation> {
    match solve_pf_closed_form(set) {
        Some(a) => Ok(a),
        None => solve_pf_waterfill(set, tol),
    }
}

/// Lexicographic max-min of the ratios `u_i / L_i`.
///
/// With one budget constraint every positive-cost player ends at the common
/// ratio `phi = min(1, 1 / sum c_i L_i)` and free players get their maximum.
pub fn solve_mmf(set: &BudgetUtilitySet) -> Allocation {
    let phi = mmf_level(set);
    let u = set
        .costs()
        .iter()
        .zip(set.limits().values())
        .map(|(&c, &l)| if c > 0.0 { phi * l } else { l })
        .collect();
    Allocation::new(u)
}

/// The common ratio `phi` reached by every positive-cost player under MMF.
pub fn mmf_level(set: &BudgetUtilitySet) -> f64 {
    let full = set.full_cost();
    if full <= 1.0 {
        1.0
    } else {
        1.0 / full
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PofResult {
    pub utilitarian: Allocation,
    pub fair: Allocation,
    pub criterion: Criterion,
    pub pof: f64,
}

impl PofResult {
    fn new(utilitarian: Allocation, fair: Allocation, criterion: Criterion) -> Self {
        let best = utilitarian.total();
        assert!(best > 0.0, "utilitarian total must be positive for a valid instance");
        let pof = 1.0 - fair.total() / best;
        Self {
            utilitarian,
            fair,
            criterion,
            pof,
        }
    }
}

/// `1 - total(fair) / total(utilitarian)`.
pub fn compute_pof(set: &BudgetUtilitySet, criterion: Criterion) -> Result<PofResult> {
    compute_pof_with_tol(set, criterion, DEFAULT_TOL)
}

pub fn compute_pof_with_tol(
    set: &BudgetUtilitySet,
    criterion: Criterion,
    tol: f64,
) -> Result<PofResult> {
    let (utilitarian, _) = solve_utilitarian(set);
    let fair = match criterion {
        Criterion::Pf => solve_pf(set, tol)?,
        Criterion::Mmf => solve_mmf(set),
    };
    Ok(PofResult::new(utilitarian, fair, criterion))
}
