// Brute-force grid search over cost vectors for small n, compared with the
// closed-form bounds.

use pof::oracle::{grid_min_mmf_bound_with_argmin, grid_min_pf_bound_with_argmin};
use pof::bounds::bound_unequal;
use pof::{Criterion, UtilityLimits};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for values in [vec![1.0, 0.4], vec![1.0, 0.6, 0.3]] {
        let limits = UtilityLimits::new(values.clone())?;
        for criterion in [Criterion::Pf, Criterion::Mmf] {
            let (grid, c) = match criterion {
                Criterion::Pf => grid_min_pf_bound_with_argmin(&limits, 50, 3)?,
                Criterion::Mmf => grid_min_mmf_bound_with_argmin(&limits, 50, 3)?,
            };
            let formula = bound_unequal(&limits, criterion)?.bound;
            println!("L={values:?} {criterion}: grid={grid:.8} formula={formula:.8} argmin c={c:.4?}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
