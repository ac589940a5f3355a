// How the MMF bound moves as utility limits spread out: limits are drawn
// from a normal around 1 with growing sigma.

use pof::experiments::{variance_sensitivity, VarianceParams};
use pof::Criterion;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rows = variance_sensitivity(VarianceParams {
        criterion: Criterion::Mmf,
        n: 9,
        sigma_step: 0.05,
        steps: 10,
        draws_per_sigma: 3,
        seed: 42,
    })?;
    println!("{}", rows[0].columns.join(","));
    for row in &rows {
        println!("t={:<3} sigma={:.2} var={:.4} bound={:.4}", row.values[0], row.values[1], row.values[3], row.values[4]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
