// Improvement over the earlier equal-limit bound for n = 2..50, written as
// CSV with an SVG chart next to it.

use pof::experiments::{rows_to_csv, svg_line_chart, sweep_delta};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rows = sweep_delta(2, 50)?;
    let maxima: Vec<f64> = rows.iter().filter(|r| r.values[4] == 1.0).map(|r| r.values[0]).collect();
    println!("local maxima of delta at n = {maxima:?}");

    let dir = std::env::temp_dir().join("pof-delta-sweep");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("delta.csv"), rows_to_csv(&rows)?)?;
    std::fs::write(dir.join("delta.svg"), svg_line_chart(&rows, "n", "delta")?)?;
    println!("wrote {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
