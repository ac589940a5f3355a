//! The `pof` command-line front end.
//!
//! Exit codes: 0 success, 1 tightness verification failed, 2 usage or
//! validation error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::allocation::{solve_mmf, solve_pf, solve_utilitarian, DEFAULT_TOL};
use crate::bounds::{bound_unequal, pf_bound_equal};
use crate::domain::{BudgetUtilitySet, Criterion, UtilityLimits};
use crate::error::PofError;
use crate::experiments::{
    n2_limit_sweep, round_sig, rows_to_csv, svg_line_chart, sweep_bounds_vs_n, sweep_delta,
    variance_sensitivity, ExperimentRow, VarianceParams,
};
use crate::oracle::{grid_min_mmf_bound_with_argmin, grid_min_pf_bound_with_argmin};
use crate::worstcase::{construct_pf_worstcase_equal, construct_worstcase, verify_tightness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pof", version, about = "Price of fairness: allocations, tight bounds, worst cases")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CriterionArg {
    Pf,
    Mmf,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Pf => Criterion::Pf,
            CriterionArg::Mmf => Criterion::Mmf,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Utilitarian,
    Pf,
    Mmf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct LimitsSource {
    /// JSON file `{"L": [...]}`
    #[arg(long)]
    limits: Option<PathBuf>,
    /// Use `L = (1, ..., 1)` with N players
    #[arg(long, value_name = "N")]
    equal_n: Option<usize>,
}

#[derive(Debug, Args)]
struct Output {
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Plot {
    /// Also write an SVG line chart to this path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Column for the chart's x axis
    #[arg(long, default_value = "n")]
    x_col: String,
    /// Column for the chart's y axis
    #[arg(long, default_value = "our_bound")]
    y_col: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tight upper bound on the price of fairness
    Bound {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[command(flatten)]
        source: LimitsSource,
        #[command(flatten)]
        output: Output,
    },
    /// Solve an instance `{"L": [...], "c": [...]}`
    Allocate {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Build the worst-case instance, solve it and compare with the bound
    Verify {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[command(flatten)]
        source: LimitsSource,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Emit the instance attaining the bound
    Worstcase {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[command(flatten)]
        source: LimitsSource,
        #[command(flatten)]
        output: Output,
    },
    /// Equal-limit bounds as a function of n (CSV)
    Sweep {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Relative improvement over the earlier equal-case PF bound (CSV)
    Delta {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Bound under truncated-normal limits with growing spread (CSV)
    Variance {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0.01)]
        sigma_step: f64,
        #[arg(long, default_value_t = 1)]
        draws: usize,
        #[arg(long, env = "POF_SEED")]
        seed: u64,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Two players with L = (1, L2), L2 = k / points for k = 1..=points (CSV)
    N2Sweep {
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Grid-search estimate of the bound for n in {2, 3}
    Oracle {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[command(flatten)]
        source: LimitsSource,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug)]
enum CliError {
    Invalid(PofError),
    Io(String),
}

impl From<PofError> for CliError {
    fn from(e: PofError) -> Self {
        CliError::Invalid(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(e) => write!(f, "{e}"),
            CliError::Io(e) => f.write_str(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_limits(source: &LimitsSource) -> CliResult<UtilityLimits> {
    match (&source.limits, source.equal_n) {
        (Some(path), _) => read_json(path),
        (None, Some(n)) => Ok(UtilityLimits::equal(n)?),
        (None, None) => unreachable!("clap enforces one source"),
    }
}

/// Rounds every float to 12 significant digits, except inside `instance`
/// objects, which must stay exactly feasible when read back.
fn round_json(value: &mut Value) {
    match value {
        Value::Number(num) if num.is_f64() => {
            if let Some(x) = num.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *num = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => {
            for (k, v) in map.iter_mut() {
                if k != "instance" {
                    round_json(v);
                }
            }
        }
        _ => {}
    }
}

fn to_json<T: Serialize>(value: &T, round: bool) -> String {
    let mut v = serde_json::to_value(value).expect("serializable output");
    if round {
        round_json(&mut v);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

fn emit(text: &str, output: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn emit_rows(rows: &[ExperimentRow], output: &Output, plot: &Plot, stdout: &mut dyn Write) -> CliResult<()> {
    emit(&rows_to_csv(rows)?, output, stdout)?;
    if let Some(path) = &plot.svg {
        let svg = svg_line_chart(rows, &plot.x_col, &plot.y_col)?;
        fs::write(path, svg).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    criterion: Criterion,
    oracle_bound: f64,
    formula_bound: f64,
    gap: f64,
    argmin_c: Vec<f64>,
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Bound {
            criterion,
            source,
            output,
        } => {
            let criterion = Criterion::from(criterion);
            let report = match (criterion, source.equal_n) {
                (Criterion::Pf, Some(n)) => pf_bound_equal(n)?,
                _ => bound_unequal(&load_limits(&source)?, criterion)?,
            };
            emit(&to_json(&report, true), &output, stdout)?;
        }
        Command::Allocate {
            method,
            instance,
            tol,
            output,
        } => {
            let set: BudgetUtilitySet = read_json(&instance)?;
            let allocation = match method {
                Method::Utilitarian => solve_utilitarian(&set).0,
                Method::Pf => solve_pf(&set, tol)?,
                Method::Mmf => solve_mmf(&set),
            };
            emit(&to_json(&allocation, true), &output, stdout)?;
        }
        Command::Verify {
            criterion,
            source,
            tol,
            output,
        } => {
            let report = verify_tightness(&load_limits(&source)?, criterion.into(), tol)?;
            emit(&to_json(&report, true), &output, stdout)?;
            if !report.pass {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Worstcase {
            criterion,
            source,
            output,
        } => {
            let criterion = Criterion::from(criterion);
            let set = match (criterion, source.equal_n) {
                (Criterion::Pf, Some(n)) => construct_pf_worstcase_equal(n)?,
                _ => construct_worstcase(&load_limits(&source)?, criterion)?,
            };
            emit(&to_json(&set, false), &output, stdout)?;
        }
        Command::Sweep {
            criterion,
            n_min,
            n_max,
            output,
            plot,
        } => {
            let rows = sweep_bounds_vs_n(criterion.into(), n_min, n_max)?;
            emit_rows(&rows, &output, &plot, stdout)?;
        }
        Command::Delta {
            n_min,
            n_max,
            output,
            plot,
        } => {
            let rows = sweep_delta(n_min, n_max)?;
            emit_rows(&rows, &output, &plot, stdout)?;
        }
        Command::Variance {
            criterion,
            n,
            steps,
            sigma_step,
            draws,
            seed,
            output,
            plot,
        } => {
            let rows = variance_sensitivity(VarianceParams {
                criterion: criterion.into(),
                n,
                sigma_step,
                steps,
                draws_per_sigma: draws,
                seed,
            })?;
            emit_rows(&rows, &output, &plot, stdout)?;
        }
        Command::N2Sweep {
            points,
            output,
            plot,
        } => {
            if points == 0 {
                return Err(PofError::InvalidParams("points must be positive".into()).into());
            }
            let l2: Vec<f64> = (1..=points).rev().map(|k| k as f64 / points as f64).collect();
            let rows = n2_limit_sweep(&l2)?;
            emit_rows(&rows, &output, &plot, stdout)?;
        }
        Command::Oracle {
            criterion,
            source,
            steps,
            rounds,
            output,
        } => {
            let criterion = Criterion::from(criterion);
            let limits = load_limits(&source)?;
            let (oracle_bound, argmin_c) = match criterion {
                Criterion::Pf => grid_min_pf_bound_with_argmin(&limits, steps, rounds)?,
                Criterion::Mmf => grid_min_mmf_bound_with_argmin(&limits, steps, rounds)?,
            };
            let formula_bound = bound_unequal(&limits, criterion)?.bound;
            let report = OracleReport {
                criterion,
                oracle_bound,
                formula_bound,
                gap: (oracle_bound - formula_bound).abs(),
                argmin_c,
            };
            emit(&to_json(&report, true), &output, stdout)?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
