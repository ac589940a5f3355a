//! Price of fairness over budget-constrained utility sets.
//!
//! An instance is a box `0 <= u_i <= L_i` cut by one budget constraint
//! `sum c_i u_i <= 1`. Every convex, compact, monotone utility set with the
//! same per-player maxima is contained in such a set, so the price of
//! fairness of the box-budget form bounds the general case.
//!
//! The crate provides:
//!
//! - [`allocation`]: utilitarian (fractional knapsack), proportional-fair
//!   (closed form and KKT water-filling) and max-min fair solvers, and the
//!   price of fairness of a fair allocation.
//! - [`bounds`]: tight upper bounds on the price of proportional and
//!   max-min fairness, for equal and unequal maximum utilities, together with
//!   the earlier equal-case comparators and their relative gap.
//! - [`worstcase`]: instances that attain each bound, and an end-to-end
//!   tightness check that solves them.
//! - [`oracle`]: brute-force grid minimizers and random feasible sampling
//!   used to cross-check the closed forms.
//! - [`experiments`]: bound-versus-n sweeps, variance sensitivity and CSV/SVG
//!   emission.
//! - [`cli`]: the `pof` command-line front end.

pub mod allocation;
pub mod bounds;
pub mod cli;
pub mod domain;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod worstcase;

pub use allocation::{
    compute_pof, solve_mmf, solve_pf, solve_pf_closed_form, solve_pf_waterfill, solve_utilitarian,
    PofResult, DEFAULT_TOL,
};
pub use bounds::{
    bft_mmf_bound_equal, bft_pf_bound_equal, delta_improvement, mmf_bound_unequal, pf_bound_equal,
    pf_bound_unequal, worst_case_sup, PrefixAggregates,
};
pub use domain::{
    Allocation, AuxValue, BoundReport, BudgetUtilitySet, CaseTag, Criterion, KnapsackBreakdown,
    Region, UtilityLimits,
};
pub use error::{PofError, Result};
pub use worstcase::{
    construct_mmf_worstcase, construct_pf_worstcase_equal, construct_pf_worstcase_unequal,
    verify_tightness, TightnessReport,
};
