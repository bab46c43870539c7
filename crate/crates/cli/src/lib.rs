//! `icdof` command-line runner.
//!
//! Every subcommand writes one CSV (`snr_db,parameter,estimate,stderr,analytic_value`)
//! and, when a destination is known, a JSON summary echoing the spec with
//! fitted values and a pass/fail verdict. Exit codes: 0 success, 2 config or
//! I/O error, 3 numeric error.

pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use icdof::experiments::{self, RateCurveParams, TailEstimate, TailFlag};
use icdof::exporders::ScalingConditions;
use serde_json::{json, Value};
use thiserror::Error;

pub use spec::{load_spec, to_config_string, Command, ExperimentSpec, Flags};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "ICDOF_THREADS";

pub const CSV_HEADER: [&str; 5] = [
    "snr_db",
    "parameter",
    "estimate",
    "stderr",
    "analytic_value",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(#[from] clap::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl From<icdof::Error> for CliError {
    fn from(e: icdof::Error) -> Self {
        match e {
            icdof::Error::Numeric(_) => CliError::Numeric(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "icdof",
    version,
    about = "Monte Carlo checks for opportunistic interference channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Mean sum rate per SNR and its high-SNR slope.
    Rate(Flags),
    /// Tail-exponent sweep of an order statistic.
    Tail(Flags),
    /// Best-group statistic with n = round(scale·snr^ξ).
    Scaling(Flags),
    /// Lower-tail exponent of Wishart eigen-orders.
    Wishart(Flags),
    /// de Finetti inequality P(max ≤ x) ≥ P(X ≤ x)ⁿ.
    Definetti(Flags),
    /// Degrees-of-freedom bounds for ξ, K, N.
    Bounds(Flags),
}

impl Sub {
    fn split(&self) -> (Command, &Flags) {
        match self {
            Sub::Rate(f) => (Command::Rate, f),
            Sub::Tail(f) => (Command::Tail, f),
            Sub::Scaling(f) => (Command::Scaling, f),
            Sub::Wishart(f) => (Command::Wishart, f),
            Sub::Definetti(f) => (Command::Definetti, f),
            Sub::Bounds(f) => (Command::Bounds, f),
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match try_run(argv) {
        Ok(()) => 0,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            CliError::Usage(e).exit_code()
        }
        Err(e) => {
            eprintln!("icdof: {e}");
            e.exit_code()
        }
    }
}

fn try_run<I, T>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let (command, flags) = cli.command.split();
    let spec = ExperimentSpec::resolve(command, flags)?;
    let threads = match flags.threads {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                CliError::Config(format!("{THREADS_ENV}: not a thread count: {v:?}"))
            })?),
            Err(_) => None,
        },
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Config("threads: must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    let report = pool.install(|| execute(&spec))?;
    emit(&spec, &report)
}

/// Result of one experiment before it is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<[String; 5]>,
    pub results: Value,
    pub checks: Vec<Value>,
    pub pass: bool,
    /// Lines for stdout instead of a CSV (used by `bounds`).
    pub text: Option<String>,
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// Runs the experiment described by `spec` on the current rayon pool.
pub fn execute(spec: &ExperimentSpec) -> Result<Report, CliError> {
    match spec.command {
        Command::Tail => {
            let est = experiments::tail_sweep(
                spec.analytic_law(),
                &spec.thresholds,
                &spec.snr_linear(),
                spec.trials,
                spec.seed,
            )?;
            Ok(tail_report(spec, &est))
        }
        Command::Wishart => {
            let est = experiments::wishart_tail_run(
                spec.p,
                spec.q,
                &spec.thresholds,
                &spec.snr_linear(),
                spec.trials,
                spec.seed,
            )?;
            Ok(tail_report(spec, &est))
        }
        Command::Rate => {
            let params = RateCurveParams {
                config: spec.network(),
                snr_grid: spec.snr_linear(),
                trials: spec.trials,
                mode: spec.mode,
                selector: spec.selector,
            };
            let curve = experiments::rate_curve(&params)?;
            let rows = spec
                .snr_db
                .iter()
                .enumerate()
                .map(|(i, &db)| {
                    [
                        num(db),
                        "sum_rate".into(),
                        num(curve.mean[i]),
                        num(curve.stderr[i]),
                        String::new(),
                    ]
                })
                .collect();
            Ok(Report {
                rows,
                results: json!({ "dof_slope": curve.dof.slope, "dof_intercept": curve.dof.intercept,
                    "dof_points": curve.dof.points_used, "mean_realization_slope": curve.mean_realization_slope,
                    "mean_sum_rate": curve.mean }),
                checks: vec![],
                pass: true,
                text: None,
            })
        }
        Command::Scaling => {
            let params = experiments::ScalingParams {
                xi: spec.xi,
                k: spec.active,
                antennas: spec.antennas,
                users_scale: spec.users_scale,
                snr_grid: spec.snr_linear(),
                trials: spec.trials,
                seed: spec.seed,
                selector: spec.scaling_selector,
            };
            let rec = experiments::scaling_run(&params)?;
            let tol = spec.default_tolerance();
            let rows = spec
                .snr_db
                .iter()
                .zip(&rec.points)
                .map(|(&db, p)| {
                    let analytic = if rec.dof.is_none() {
                        num(rec.bound)
                    } else {
                        String::new()
                    };
                    [
                        num(db),
                        format!("n={}", p.users),
                        num(p.mean),
                        num(p.stderr),
                        analytic,
                    ]
                })
                .collect();
            let (value, what) = match &rec.dof {
                Some(d) => (d.slope, "dof_slope"),
                None => (
                    rec.points.last().map(|p| p.mean).unwrap_or(f64::NAN),
                    "mean_at_largest_snr",
                ),
            };
            let ok = (value - rec.bound).abs() <= tol;
            Ok(Report {
                rows,
                results: json!({ "bound": rec.bound, "bounds": rec.bounds, "points": rec.points, "dof": rec.dof }),
                checks: vec![
                    json!({ "quantity": what, "value": value, "target": rec.bound, "tolerance": tol, "pass": ok }),
                ],
                pass: ok,
                text: None,
            })
        }
        Command::Definetti => {
            let pts = experiments::exchangeability_check(
                spec.users,
                &spec.thresholds,
                spec.trials,
                spec.seed,
                spec.latent,
            )?;
            let rows = pts
                .iter()
                .map(|p| {
                    [
                        String::new(),
                        num(p.x),
                        num(p.lhs),
                        num(p.stderr),
                        num(p.rhs),
                    ]
                })
                .collect();
            let pass = pts.iter().all(|p| p.holds);
            Ok(Report {
                rows,
                checks: pts.iter().map(|p| json!({ "x": p.x, "margin": p.margin, "stderr": p.stderr, "pass": p.holds })).collect(),
                results: json!({ "points": pts }),
                pass,
                text: None,
            })
        }
        Command::Bounds => {
            let b = icdof::theorem_bounds(spec.xi, spec.active, spec.antennas)?;
            let c = ScalingConditions {
                k: spec.active,
                antennas: spec.antennas,
            };
            let text = format!(
                "lb={}\nub={}\nzeta={}\nlb_mimo={}\nxi_sufficient(d=1)={}\nxi_necessary(d=1)={}\nxi_sufficient_mimo(d=1)={}\n",
                b.lb_siso,
                b.ub_siso,
                b.zeta,
                b.lb_mimo,
                c.xi_sufficient(1.0),
                c.xi_necessary(1.0),
                c.xi_sufficient_mimo(1.0)
            );
            Ok(Report {
                rows: vec![],
                results: json!({ "bounds": b }),
                checks: vec![],
                pass: true,
                text: Some(text),
            })
        }
    }
}

fn tail_report(spec: &ExperimentSpec, est: &TailEstimate) -> Report {
    let tol = spec.default_tolerance();
    let mut rows = Vec::new();
    for (i, &db) in spec.snr_db.iter().enumerate() {
        for (j, fit) in est.fits.iter().enumerate() {
            let predicted = est.snr_grid[i].powf(-fit.analytic);
            rows.push([
                num(db),
                num(fit.threshold),
                num(est.probability(i, j)),
                num(est.probability_stderr(i, j)),
                num(predicted),
            ]);
        }
    }
    let checks: Vec<Value> = est
        .fits
        .iter()
        .map(|f| {
            let pass = match f.exponent {
                Some(e) => (e - f.analytic).abs() <= tol,
                // nothing observed is consistent only with an infinite exponent
                None => f.analytic.is_infinite(),
            };
            json!({ "threshold": f.threshold, "fitted": f.exponent, "stderr": f.stderr, "analytic": f.analytic,
                "piecewise": f.piecewise, "tolerance": tol, "below_resolution": f.flags.contains(&TailFlag::BelowResolution),
                "low_count": f.flags.contains(&TailFlag::LowCount), "pass": pass })
        })
        .collect();
    let pass = checks.iter().all(|c| c["pass"] == Value::Bool(true));
    Report {
        rows,
        results: json!({ "law": est.law, "trials": est.trials, "counts": est.counts,
            "fitted_exponents": est.fits.iter().map(|f| f.exponent).collect::<Vec<_>>(),
            "stderr": est.fits.iter().map(|f| f.stderr).collect::<Vec<_>>() }),
        checks,
        pass,
        text: None,
    }
}

/// CSV bytes for a report, header first.
pub fn csv_bytes(report: &Report) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)
        .map_err(|e| CliError::Io(e.to_string()))?;
    for r in &report.rows {
        w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn summary_json(spec: &ExperimentSpec, report: &Report) -> Value {
    json!({ "spec": spec, "results": report.results, "checks": report.checks, "pass": report.pass })
}

fn summary_path(spec: &ExperimentSpec) -> Option<PathBuf> {
    spec.summary
        .clone()
        .or_else(|| spec.out.as_ref().map(|o| o.with_extension("json")))
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit(spec: &ExperimentSpec, report: &Report) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    if let Some(text) = &report.text {
        stdout.write_all(text.as_bytes()).map_err(io)?;
    }
    if !report.rows.is_empty() || report.text.is_none() {
        let csv = csv_bytes(report)?;
        match &spec.out {
            Some(path) => write_file(path, &csv)?,
            None => stdout.write_all(&csv).map_err(io)?,
        }
    }
    if let Some(path) = summary_path(spec) {
        let text = serde_json::to_string_pretty(&summary_json(spec, report))
            .map_err(|e| CliError::Io(e.to_string()))?;
        write_file(&path, text.as_bytes())?;
    }
    Ok(())
}
