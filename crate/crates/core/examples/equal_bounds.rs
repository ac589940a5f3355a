// Price-of-PF bound for equal utility limits, next to the earlier
// `1 - (2 sqrt(n) - 1)/n` bound and the improvement between them.

use pof::bounds::{bft_pf_bound_equal, delta_improvement, pf_bound_equal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>10} {:>10} {:>10}  case", "n", "ours", "earlier", "delta");
    for n in [2, 3, 4, 5, 6, 9, 12, 16, 20, 30, 42, 100] {
        let report = pf_bound_equal(n)?;
        println!(
            "{n:>4} {:>10.6} {:>10.6} {:>10.6}  {}",
            report.bound,
            bft_pf_bound_equal(n)?,
            delta_improvement(n)?,
            report.case_tag
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
