// Solves one budget instance under the utilitarian, PF and MMF rules and
// reports the price of each fairness criterion.

use pof::allocation::{compute_pof, solve_mmf, solve_pf, solve_utilitarian, DEFAULT_TOL};
use pof::{BudgetUtilitySet, Criterion};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let set = BudgetUtilitySet::new(vec![1.0, 0.8, 0.5, 0.2], vec![0.3, 0.5, 1.0, 2.0])?;

    let (util, knapsack) = solve_utilitarian(&set);
    println!("utilitarian u={:?} total={:.6}", util.utilities(), util.total());
    println!("  split at position {} with fraction {:.4}", knapsack.split_index, knapsack.fraction);

    let pf = solve_pf(&set, DEFAULT_TOL)?;
    println!("pf          u={:?} total={:.6}", pf.utilities(), pf.total());
    let mmf = solve_mmf(&set);
    println!("mmf         u={:?} total={:.6}", mmf.utilities(), mmf.total());

    for criterion in [Criterion::Pf, Criterion::Mmf] {
        println!("price of {criterion}: {:.6}", compute_pof(&set, criterion)?.pof);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
