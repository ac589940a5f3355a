// Tight PF and MMF bounds for a handful of unequal limit vectors, with the
// case that produced each one.

use pof::bounds::bound_unequal;
use pof::{Criterion, UtilityLimits};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        vec![1.0, 0.25],
        vec![1.0, 1.0, 1.0],
        vec![4.0, 1.0, 1.0],
        vec![1.0, 0.9, 0.5, 0.1],
        vec![0.05, 0.3, 1.0, 0.7, 0.7],
    ];
    for values in cases {
        let limits = UtilityLimits::new(values.clone())?;
        for criterion in [Criterion::Pf, Criterion::Mmf] {
            let r = bound_unequal(&limits, criterion)?;
            println!(
                "L={values:?} {criterion:<3} bound={:.6} case={} l*={:?}",
                r.bound, r.case_tag, r.l_star
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
