//! Bound sweeps and sensitivity experiments, emitted as CSV rows.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::bounds::{
    bft_mmf_bound_equal, bft_pf_bound_equal, bound_unequal, delta_improvement, pf_bound_equal,
    pf_bound_unequal, worst_case_sup,
};
use crate::domain::{Criterion, UtilityLimits};
use crate::error::{PofError, Result};

/// Significant digits used for every emitted number.
pub const SIG_DIGITS: usize = 12;

/// One output record; the column set is fixed per experiment kind.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub columns: &'static [&'static str],
    pub values: Vec<f64>,
}

impl ExperimentRow {
    fn new(columns: &'static [&'static str], values: Vec<f64>) -> Self {
        debug_assert_eq!(columns.len(), values.len());
        debug_assert!(values.iter().all(|v| v.is_finite()), "{values:?}");
        Self { columns, values }
    }

    pub fn get(&self, column: &str) -> Option<f64> {
        self.columns
            .iter()
            .position(|c| *c == column)
            .map(|i| self.values[i])
    }
}

pub const SWEEP_COLUMNS: &[&str] = &["n", "our_bound", "bft_bound", "supremum"];
pub const DELTA_COLUMNS: &[&str] = &["n", "our_bound", "bft_bound", "delta", "local_max"];
pub const VARIANCE_COLUMNS: &[&str] = &["t", "sigma", "draw", "sample_variance", "our_bound", "supremum"];
pub const N2_COLUMNS: &[&str] = &["l2", "sample_variance", "our_bound"];

fn check_range(n_min: usize, n_max: usize) -> Result<()> {
    if n_min < 2 || n_min > n_max {
        return Err(PofError::InvalidRange {
            min: n_min,
            max: n_max,
        });
    }
    Ok(())
}

/// Equal-limit bounds for every `n` in `n_min..=n_max`, alongside the
/// earlier equal-case bound.
pub fn sweep_bounds_vs_n(criterion: Criterion, n_min: usize, n_max: usize) -> Result<Vec<ExperimentRow>> {
    check_range(n_min, n_max)?;
    (n_min..=n_max)
        .map(|n| {
            let (ours, bft) = match criterion {
                Criterion::Pf => (pf_bound_equal(n)?.bound, bft_pf_bound_equal(n)?),
                Criterion::Mmf => (
                    bound_unequal(&UtilityLimits::equal(n)?, Criterion::Mmf)?.bound,
                    bft_mmf_bound_equal(n)?,
                ),
            };
            Ok(ExperimentRow::new(
                SWEEP_COLUMNS,
                vec![n as f64, ours, bft, worst_case_sup(n, criterion)?],
            ))
        })
        .collect()
}

/// `true` when `delta(n)` is strictly above both existing neighbours
/// (`n = 2` has only a right neighbour).
fn is_local_max(n: usize) -> Result<bool> {
    let d = delta_improvement(n)?;
    let left = if n > 2 { d > delta_improvement(n - 1)? } else { true };
    Ok(left && d > delta_improvement(n + 1)?)
}

fn is_pronic(n: usize) -> bool {
    let a = ((n as f64).sqrt()) as usize;
    (a.saturating_sub(1)..=a + 1).any(|a| a * (a + 1) == n)
}

/// Relative improvement `delta(n)` with a local-maximum flag.
///
/// Panics if a flagged maximum is not of the form `a(a+1)`.
pub fn sweep_delta(n_min: usize, n_max: usize) -> Result<Vec<ExperimentRow>> {
    check_range(n_min, n_max)?;
    (n_min..=n_max)
        .map(|n| {
            let local_max = is_local_max(n)?;
            assert!(
                !local_max || is_pronic(n),
                "delta has a local maximum at n = {n}, which is not a(a+1)"
            );
            Ok(ExperimentRow::new(
                DELTA_COLUMNS,
                vec![
                    n as f64,
                    pf_bound_equal(n)?.bound,
                    bft_pf_bound_equal(n)?,
                    delta_improvement(n)?,
                    if local_max { 1.0 } else { 0.0 },
                ],
            ))
        })
        .collect()
}

/// Population variance (divisor `n`).
pub fn population_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Limits drawn componentwise from `Normal(1, sigma)`, redrawing any
/// non-positive component.
pub fn sample_truncated_normal_limits(n: usize, sigma: f64, rng: &mut ChaCha8Rng) -> Result<UtilityLimits> {
    if sigma == 0.0 {
        return UtilityLimits::new(vec![1.0; n]);
    }
    let normal = Normal::new(1.0, sigma).map_err(|e| PofError::InvalidParams(e.to_string()))?;
    let values = (0..n)
        .map(|_| loop {
            let x = normal.sample(rng);
            if x > 0.0 {
                break x;
            }
        })
        .collect();
    UtilityLimits::new(values)
}

/// Parameters of [`variance_sensitivity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceParams {
    pub criterion: Criterion,
    pub n: usize,
    pub sigma_step: f64,
    pub steps: usize,
    pub draws_per_sigma: usize,
    pub seed: u64,
}

/// For `t = 1..=steps` and `sigma_t = sigma_step * (t - 1)`, draws
/// `draws_per_sigma` limit vectors and records their population variance and
/// bound. Draw `(t, d)` uses its own ChaCha stream, so rows do not depend on
/// evaluation order.
pub fn variance_sensitivity(p: VarianceParams) -> Result<Vec<ExperimentRow>> {
    if p.n < 2 || p.steps == 0 || p.draws_per_sigma == 0 || !p.sigma_step.is_finite() || p.sigma_step < 0.0 {
        return Err(PofError::InvalidParams(format!(
            "need n >= 2, steps >= 1, draws_per_sigma >= 1, sigma_step >= 0; got {p:?}"
        )));
    }
    let sup = worst_case_sup(p.n, p.criterion)?;
    let mut rows = Vec::with_capacity(p.steps * p.draws_per_sigma);
    for t in 1..=p.steps {
        let sigma = p.sigma_step * (t - 1) as f64;
        for draw in 0..p.draws_per_sigma {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            rng.set_stream(((t - 1) * p.draws_per_sigma + draw) as u64);
            let limits = sample_truncated_normal_limits(p.n, sigma, &mut rng)?;
            let bound = bound_unequal(&limits, p.criterion)?.bound;
            rows.push(ExperimentRow::new(
                VARIANCE_COLUMNS,
                vec![
                    t as f64,
                    sigma,
                    draw as f64,
                    population_variance(limits.values()),
                    bound,
                    sup,
                ],
            ));
        }
    }
    Ok(rows)
}

/// Two players with `L = (1, L2)`: PF bound against the population variance
/// `(1 - L2)^2 / 4`.
pub fn n2_limit_sweep(l2_values: &[f64]) -> Result<Vec<ExperimentRow>> {
    l2_values
        .iter()
        .map(|&l2| {
            if !(l2 > 0.0 && l2 <= 1.0) {
                return Err(PofError::InvalidParams(format!("L2 must lie in (0, 1], got {l2}")));
            }
            let limits = UtilityLimits::new(vec![1.0, l2])?;
            Ok(ExperimentRow::new(
                N2_COLUMNS,
                vec![
                    l2,
                    population_variance(limits.values()),
                    pf_bound_unequal(&limits)?.bound,
                ],
            ))
        })
        .collect()
}

/// Decimal rendering with at most [`SIG_DIGITS`] significant digits.
pub fn format_sig(x: f64) -> String {
    format_sig_digits(x, SIG_DIGITS)
}

pub fn format_sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-6..=15).contains(&exp) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let rounded: f64 = sci.parse().expect("round trip");
    trim_zeros(&format!("{rounded:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

/// CSV with a header row, `,` separator and 12 significant digits.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| PofError::InvalidParams(format!("csv: {e}"));
    if let Some(first) = rows.first() {
        w.write_record(first.columns).map_err(io)?;
    }
    for row in rows {
        w.write_record(row.values.iter().map(|v| format_sig(*v))).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| PofError::InvalidParams(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

/// Self-contained SVG line chart of `y_col` against `x_col`.
pub fn svg_line_chart(rows: &[ExperimentRow], x_col: &str, y_col: &str) -> Result<String> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| match (r.get(x_col), r.get(y_col)) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(PofError::InvalidParams(format!(
                "unknown column {x_col:?} or {y_col:?}"
            ))),
        })
        .collect::<Result<_>>()?;
    if points.is_empty() {
        return Err(PofError::InvalidParams("no rows to plot".into()));
    }
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let span = |f: fn(&(f64, f64)) -> f64| {
        let lo = points.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = span(|p| p.0);
    let (y0, y1) = span(|p| p.1);
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<line x1=\"{pad}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{b}\" stroke=\"black\"/>\n",
        b = h - pad,
        r = w - pad
    ));
    svg.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n",
        path.join(" ")
    ));
    let label = |x: f64, y: f64, anchor: &str, text: String| {
        format!("<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"12\" text-anchor=\"{anchor}\">{text}</text>\n")
    };
    svg.push_str(&label(pad, h - pad + 18.0, "middle", format_sig_digits(x0, 4)));
    svg.push_str(&label(w - pad, h - pad + 18.0, "middle", format_sig_digits(x1, 4)));
    svg.push_str(&label(pad - 6.0, h - pad, "end", format_sig_digits(y0, 4)));
    svg.push_str(&label(pad - 6.0, pad + 4.0, "end", format_sig_digits(y1, 4)));
    svg.push_str(&label(w / 2.0, h - 10.0, "middle", x_col.to_string()));
    svg.push_str(&label(w / 2.0, 20.0, "middle", format!("{y_col} vs {x_col}")));
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pf_sweep_small_range() {
        let rows = sweep_bounds_vs_n(Criterion::Pf, 2, 4).unwrap();
        assert_eq!(rows.len(), 3);
        assert!((rows[0].get("our_bound").unwrap() - 0.066_987_298_1).abs() < 1e-9);
        assert!((rows[0].get("bft_bound").unwrap() - 0.085_786_437_6).abs() < 1e-9);
        assert!((rows[1].get("our_bound").unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((rows[2].get("our_bound").unwrap() - 0.25).abs() < 1e-15);
        assert!((rows[2].get("bft_bound").unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn mmf_sweep_contains_nine() {
        let rows = sweep_bounds_vs_n(Criterion::Mmf, 9, 9).unwrap();
        assert!((rows[0].get("our_bound").unwrap() - 0.64).abs() < 1e-12);
        assert!(sweep_bounds_vs_n(Criterion::Mmf, 5, 4).is_err());
        assert!(sweep_bounds_vs_n(Criterion::Mmf, 1, 4).is_err());
    }

    #[test]
    fn delta_sweep_examples() {
        let rows = sweep_delta(2, 7).unwrap();
        let d = |n: usize| rows[n - 2].get("delta").unwrap();
        assert!(d(6) > d(5) && d(6) > d(7));
        assert_eq!(d(4), 0.0);
        assert!((d(2) - 0.219).abs() < 1e-3);
        let maxima: Vec<usize> = rows
            .iter()
            .filter(|r| r.get("local_max") == Some(1.0))
            .map(|r| r.get("n").unwrap() as usize)
            .collect();
        assert_eq!(maxima, vec![2, 6]);
    }

    #[test]
    fn n2_sweep_examples() {
        let rows = n2_limit_sweep(&[1.0, 0.25, 1e-6]).unwrap();
        assert!((rows[0].get("our_bound").unwrap() - 0.066_987_298).abs() < 1e-8);
        assert_eq!(rows[0].get("sample_variance"), Some(0.0));
        assert!((rows[1].get("our_bound").unwrap() - 0.375).abs() < 1e-15);
        assert!((rows[1].get("sample_variance").unwrap() - 0.140_625).abs() < 1e-15);
        assert!((rows[2].get("our_bound").unwrap() - 0.5).abs() < 1e-4);
        assert!(n2_limit_sweep(&[0.0]).is_err());
        assert!(n2_limit_sweep(&[1.5]).is_err());
    }

    #[test]
    fn variance_zero_sigma_anchors() {
        let base = VarianceParams {
            criterion: Criterion::Pf,
            n: 9,
            sigma_step: 0.01,
            steps: 3,
            draws_per_sigma: 2,
            seed: 42,
        };
        let rows = variance_sensitivity(base).unwrap();
        assert_eq!(rows.len(), 6);
        assert!((rows[0].get("our_bound").unwrap() - 4.0 / 9.0).abs() < 1e-12);
        assert_eq!(rows[0].get("sample_variance"), Some(0.0));

        let rows = variance_sensitivity(VarianceParams {
            criterion: Criterion::Mmf,
            ..base
        })
        .unwrap();
        assert!((rows[0].get("our_bound").unwrap() - 0.64).abs() < 1e-12);
        assert!(variance_sensitivity(VarianceParams { steps: 0, ..base }).is_err());
        assert!(variance_sensitivity(VarianceParams { sigma_step: -1.0, ..base }).is_err());
    }

    #[test]
    fn truncated_normal_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let l = sample_truncated_normal_limits(5, 2.0, &mut rng).unwrap();
            assert!(l.values().iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(0.25), "0.25");
        assert_eq!(format_sig(2.0), "2");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig((2.0 - 3f64.sqrt()) / 4.0), "0.0669872981078");
        assert_eq!(format_sig(123456.0), "123456");
        assert_eq!(format_sig(-0.64), "-0.64");
        assert_eq!(format_sig(1.5e-9), "1.5e-9");
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn csv_and_svg() {
        let rows = sweep_bounds_vs_n(Criterion::Pf, 2, 3).unwrap();
        let csv = rows_to_csv(&rows).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,our_bound,bft_bound,supremum"));
        assert_eq!(lines.next(), Some("2,0.0669872981078,0.0857864376269,0.5"));
        let svg = svg_line_chart(&rows, "n", "our_bound").unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("polyline"));
        assert!(svg_line_chart(&rows, "n", "nope").is_err());
    }
}
