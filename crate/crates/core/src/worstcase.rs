//! Budget instances that attain the tight bounds, and an end-to-end check
//! that solving them reproduces the bound.

use serde::Serialize;

use crate::allocation::compute_pof;
use crate::bounds::{
    analyze_mmf, analyze_pf, bound_unequal, equal_case_block, PfWinner,
};
use crate::domain::{unpermute, BudgetUtilitySet, CaseTag, Criterion, UtilityLimits};
use crate::error::{PofError, Result};

/// Largest cost not above `c` with `cost * limit <= 1` in floating point.
fn capped(c: f64, limit: f64) -> f64 {
    let mut c = c;
    while c * limit > 1.0 {
        c = c.next_down();
    }
    c
}

fn build(limits: &UtilityLimits, sorted_costs: &[f64], perm: &[usize]) -> Result<BudgetUtilitySet> {
    let costs = unpermute(sorted_costs, perm);
    let costs = costs
        .iter()
        .zip(limits.values())
        .map(|(&c, &l)| capped(c, l))
        .collect();
    BudgetUtilitySet::validate_instance(limits.clone(), costs)
}

/// Worst case for proportional fairness with `n` equal limits.
///
/// `n = 2` uses `c = (sqrt 3 - 1, 1)`; otherwise the first `m` players cost
/// `1/m` and the rest cost 1, with `m` from [`equal_case_block`].
pub fn construct_pf_worstcase_equal(n: usize) -> Result<BudgetUtilitySet> {
    if n < 2 {
        return Err(PofError::InvalidN(n));
    }
    let limits = UtilityLimits::equal(n)?;
    let costs = if n == 2 {
        vec![3f64.sqrt() - 1.0, 1.0]
    } else {
        let m = equal_case_block(n);
        (0..n).map(|i| if i < m { 1.0 / m as f64 } else { 1.0 }).collect()
    };
    BudgetUtilitySet::validate_instance(limits, costs)
}

/// Worst case for proportional fairness with arbitrary limits.
///
/// With `L` sorted descending and `l*` the winning split index: the top
/// `l*` players cost `y* / sqrt(L_i)` with `y* = 1 / A(l*)`, every other
/// player costs `1 / L_i`. When the interior candidate wins, only player 1
/// is discounted, to `y~ / sqrt(L_1)`.
pub fn construct_pf_worstcase_unequal(limits: &UtilityLimits) -> Result<BudgetUtilitySet> {
    let an = analyze_pf(limits);
    let (l_star, y) = match an.winner {
        PfWinner::Prefix => (an.l_star, 1.0 / an.agg.a[an.l_star]),
        PfWinner::Tilde => (1, an.y_tilde()),
    };
    let sorted_costs: Vec<f64> = an
        .sorted
        .iter()
        .enumerate()
        .map(|(i, &l)| if i < l_star { y / l.sqrt() } else { 1.0 / l })
        .collect();
    build(limits, &sorted_costs, &an.perm)
}

/// Worst case for max-min fairness: the top `l*` players cost
/// `Y / (l* L_i)`, the rest `1 / L_i`.
pub fn construct_mmf_worstcase(limits: &UtilityLimits) -> Result<BudgetUtilitySet> {
    let an = analyze_mmf(limits);
    let y = an.y();
    assert!(
        y > 0.0 && y <= 1.0,
        "worst-case level Y = {y} outside (0, 1] for sorted limits {:?} (l* = {})",
        an.sorted,
        an.l_star
    );
    let l_star = an.l_star;
    let sorted_costs: Vec<f64> = an
        .sorted
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            if i < l_star {
                y / (l_star as f64 * l)
            } else {
                1.0 / l
            }
        })
        .collect();
    build(limits, &sorted_costs, &an.perm)
}

pub fn construct_worstcase(limits: &UtilityLimits, criterion: Criterion) -> Result<BudgetUtilitySet> {
    match criterion {
        Criterion::Pf => construct_pf_worstcase_unequal(limits),
        Criterion::Mmf => construct_mmf_worstcase(limits),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub criterion: Criterion,
    pub case_tag: CaseTag,
    pub l_star: Option<usize>,
    pub bound: f64,
    pub achieved_pof: f64,
    pub gap: f64,
    pub tol: f64,
    pub pass: bool,
    pub instance: BudgetUtilitySet,
    pub utilitarian_total: f64,
    pub fair_total: f64,
}

/// Builds the worst-case instance for `limits`, solves it and compares the
/// achieved price of fairness against the bound.
pub fn verify_tightness(
    limits: &UtilityLimits,
    criterion: Criterion,
    tol: f64,
) -> Result<TightnessReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(PofError::InvalidParams(format!("tol must be positive, got {tol}")));
    }
    let report = bound_unequal(limits, criterion)?;
    let instance = construct_worstcase(limits, criterion)?;
    let pof = compute_pof(&instance, criterion)?;
    let gap = (report.bound - pof.pof).abs();
    Ok(TightnessReport {
        criterion,
        case_tag: report.case_tag,
        l_star: report.l_star,
        bound: report.bound,
        achieved_pof: pof.pof,
        gap,
        tol,
        pass: gap <= tol,
        utilitarian_total: pof.utilitarian.total(),
        fair_total: pof.fair.total(),
        instance,
    })
}
