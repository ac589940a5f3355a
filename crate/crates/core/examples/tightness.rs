// Builds the worst-case instance for a limit vector and checks that its
// price of fairness matches the bound.

use pof::{verify_tightness, Criterion, UtilityLimits};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let limits = UtilityLimits::new(vec![0.9, 0.2, 1.0, 0.6, 0.6, 0.05])?;
    for criterion in [Criterion::Pf, Criterion::Mmf] {
        let r = verify_tightness(&limits, criterion, 1e-9)?;
        println!(
            "{criterion}: bound={:.12} achieved={:.12} gap={:.1e} pass={}",
            r.bound, r.achieved_pof, r.gap, r.pass
        );
        println!("  costs={:?}", r.instance.costs());
        if !r.pass {
            return Err(format!("{criterion} worst case missed the bound").into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
