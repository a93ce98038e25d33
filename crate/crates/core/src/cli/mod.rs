//! `memvel` command line: `eval`, `sweep` and `verify`.
//!
//! Settings come from an optional TOML file (`--config`) whose keys are the
//! [`RunConfig`] field names; flags override the file.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/configuration/input
//! error, 3 numerical failure.

pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid;
use crate::operator::{velocity, velocity_grid, EvaluationBreakdown};
use crate::quadrature::{QuadratureSpec, Scheme};
use crate::schedule::ExponentSchedule;
use crate::trajectory::Trajectory;

use suites::{Inputs, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const DEFAULT_X: &str = "sin(t)";
const DEFAULT_ALPHA: &str = "0.7";
const DEFAULT_BETA: &str = "0.5+0.4*sin(t)";
const DEFAULT_HORIZON: f64 = 1.0;
const DEFAULT_SWEEP_POINTS: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eval,
    Sweep,
    Verify,
}

/// Evaluation times: an explicit list or a `{ start, stop, count }` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Times {
    List(Vec<f64>),
    Grid { start: f64, stop: f64, count: usize },
}

impl Times {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        match *self {
            Times::List(ref ts) => Ok(ts.clone()),
            Times::Grid { start, stop, count } => {
                if count == 0 || (count == 1 && start != stop) {
                    return Err(Error::Config(format!("grid {start}..{stop} needs at least 2 points, got {count}")));
                }
                if !(start.is_finite() && stop.is_finite() && start <= stop) {
                    return Err(Error::Config(format!("invalid grid bounds {start}..{stop}")));
                }
                Ok(grid::linspace(start, stop, count))
            }
        }
    }
}

/// Contents of a `--config` file. Every field is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub x_expr: Option<String>,
    pub alpha_expr: Option<String>,
    pub beta_expr: Option<String>,
    pub horizon: Option<f64>,
    pub times: Option<Times>,
    pub quadrature: Option<QuadratureSpec>,
    pub verify_suite: Option<Vec<String>>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Parser)]
#[command(name = "memvel", version, about = "Memory-weighted velocity with time-varying power-law memory")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate V(t) at a single time.
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// Evaluation time in [0, T].
        #[arg(long = "t", allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Evaluate V over a set of times.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Explicit comma-separated times.
        #[arg(long, value_delimiter = ',', conflicts_with = "grid", allow_hyphen_values = true)]
        times: Option<Vec<f64>>,
        /// Uniform grid as `start,stop,count`.
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        grid: Option<Vec<f64>>,
    },
    /// Run verification suites and write a report.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Suite name, comma-separated list, or `all`; repeatable.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML file with run settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Trajectory x(t).
    #[arg(long = "x", allow_hyphen_values = true)]
    x: Option<String>,
    /// Memory exponent α(t).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Memory exponent β(t).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Horizon T.
    #[arg(long = "T")]
    horizon: Option<f64>,
    #[arg(long)]
    scheme: Option<Scheme>,
    /// Jacobi rule size, or nodes per panel.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    panels: Option<usize>,
    /// Grading exponent q for the graded scheme.
    #[arg(long)]
    grading: Option<f64>,
    #[arg(long)]
    target_rel_err: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

/// A failure with its exit code and diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// Exit code for an error raised while running a command.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

// Errors raised while building inputs are input errors, whatever their kind.
fn input<T>(what: &str, r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure::usage(format!("{what}: {e}")))
}

/// Settings after merging file and flags.
struct Resolved {
    inputs: Inputs,
    times: Option<Vec<f64>>,
    suites: Vec<String>,
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
}

fn resolve(common: CommonArgs, command: Command) -> std::result::Result<Resolved, Failure> {
    let cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != command {
            return Err(Failure::usage(format!(
                "config file is for `{c:?}` but `{command:?}` was requested"
            ).to_lowercase()));
        }
    }
    let horizon = common.horizon.or(cfg.horizon).unwrap_or(DEFAULT_HORIZON);
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Failure::usage(format!("horizon T must be positive, got {horizon}")));
    }
    let x_src = common.x.or(cfg.x_expr).unwrap_or_else(|| DEFAULT_X.into());
    let a_src = common.alpha.or(cfg.alpha_expr).unwrap_or_else(|| DEFAULT_ALPHA.into());
    let b_src = common.beta.or(cfg.beta_expr).unwrap_or_else(|| DEFAULT_BETA.into());
    let x = input(&format!("x `{x_src}`"), Trajectory::parse(&x_src, horizon))?;
    let alpha = input(&format!("alpha `{a_src}`"), ExponentSchedule::parse(&a_src, horizon))?;
    let beta = input(&format!("beta `{b_src}`"), ExponentSchedule::parse(&b_src, horizon))?;

    let mut spec = cfg.quadrature.unwrap_or_default();
    if let Some(s) = common.scheme {
        spec.scheme = s;
    }
    if let Some(n) = common.order {
        spec.order = n;
    }
    if let Some(n) = common.panels {
        spec.panels = n;
    }
    if let Some(q) = common.grading {
        spec.grading_exponent = Some(q);
    }
    if let Some(e) = common.target_rel_err {
        spec.target_rel_err = e;
    }
    input("quadrature", spec.validate())?;

    Ok(Resolved {
        inputs: Inputs { x, alpha, beta, spec },
        times: cfg.times.map(|t| t.resolve()).transpose()?,
        suites: cfg.verify_suite.unwrap_or_default(),
        output: common.output.or(cfg.output_path),
        format: common.format.or(cfg.output_format),
    })
}

fn check_times(ts: &[f64], horizon: f64) -> std::result::Result<(), Failure> {
    if ts.is_empty() {
        return Err(Failure::usage("no evaluation times given"));
    }
    match ts.iter().find(|&&t| !(0.0..=horizon).contains(&t)) {
        Some(t) => Err(Failure::usage(format!("time {t} lies outside [0, {horizon}]"))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    schema: u32,
    x: String,
    alpha: String,
    beta: String,
    horizon: f64,
    #[serde(flatten)]
    result: &'a EvaluationBreakdown,
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    schema: u32,
    x: String,
    alpha: String,
    beta: String,
    horizon: f64,
    quadrature: QuadratureSpec,
    rows: &'a [EvaluationBreakdown],
    failures: Vec<SweepFailure>,
}

#[derive(Serialize)]
struct SweepFailure {
    t: f64,
    error: String,
}

fn describe(inp: &Inputs) -> (String, String, String, f64) {
    (
        inp.x.value_expr().to_string(),
        inp.alpha.definition().to_string(),
        inp.beta.definition().to_string(),
        inp.x.horizon(),
    )
}

fn cmd_eval(r: Resolved, t: Option<f64>) -> std::result::Result<i32, Failure> {
    let t = match (t, r.times.as_deref()) {
        (Some(t), _) => t,
        (None, Some([t])) => *t,
        _ => return Err(Failure::usage("eval needs a single time: pass --t")),
    };
    let h = r.inputs.x.horizon();
    check_times(&[t], h)?;
    let inp = &r.inputs;
    let b = velocity(&inp.x, &inp.alpha, &inp.beta, t, &inp.spec)?;
    let bytes = match r.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Csv => output::sweep_csv(&[b])?,
        OutputFormat::Json => {
            let (x, alpha, beta, horizon) = describe(inp);
            output::json(&EvalOutput {
                schema: 1,
                x,
                alpha,
                beta,
                horizon,
                result: &b,
            })?
        }
    };
    output::emit(&bytes, r.output.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_sweep(r: Resolved, times: Option<Vec<f64>>, grid_arg: Option<Vec<f64>>) -> std::result::Result<i32, Failure> {
    let h = r.inputs.x.horizon();
    let ts = if let Some(ts) = times {
        ts
    } else if let Some(g) = grid_arg {
        let [start, stop, count] = g[..] else {
            return Err(Failure::usage("--grid expects start,stop,count"));
        };
        if !(count >= 1.0 && count.fract() == 0.0) {
            return Err(Failure::usage(format!("grid count must be a positive integer, got {count}")));
        }
        Times::Grid {
            start,
            stop,
            count: count as usize,
        }
        .resolve()?
    } else if let Some(ts) = r.times.clone() {
        ts
    } else {
        grid::linspace(0.0, h, DEFAULT_SWEEP_POINTS)
    };
    check_times(&ts, h)?;
    let inp = &r.inputs;
    let res = velocity_grid(&inp.x, &inp.alpha, &inp.beta, &ts, &inp.spec);
    let bytes = match r.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => output::sweep_csv(&res.points)?,
        OutputFormat::Json => {
            let (x, alpha, beta, horizon) = describe(inp);
            output::json(&SweepOutput {
                schema: 1,
                x,
                alpha,
                beta,
                horizon,
                quadrature: inp.spec,
                rows: &res.points,
                failures: res
                    .failures
                    .iter()
                    .map(|(t, e)| SweepFailure { t: *t, error: e.to_string() })
                    .collect(),
            })?
        }
    };
    output::emit(&bytes, r.output.as_deref())?;
    for (t, e) in &res.failures {
        eprintln!("memvel: t = {t}: {e}");
    }
    Ok(res.failures.first().map_or(EXIT_OK, |(_, e)| exit_code(e)))
}

fn cmd_verify(r: Resolved, flags: Vec<String>) -> std::result::Result<i32, Failure> {
    let names = if !flags.is_empty() {
        flags
    } else if !r.suites.is_empty() {
        r.suites.clone()
    } else {
        vec!["all".to_string()]
    };
    let suites = input("suite", Suite::parse_list(&names))?;
    let report = suites::run_suites(&suites, &r.inputs)?;
    let bytes = match r.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Csv => output::report_csv(&report)?,
        OutputFormat::Json => output::json(&report)?,
    };
    output::emit(&bytes, r.output.as_deref())?;
    if report.passed() {
        return Ok(EXIT_OK);
    }
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed()).collect();
    for c in &failed {
        eprintln!("memvel: check {} failed: {}", c.name, c.detail);
    }
    // only evaluation errors, nothing actually violated: a numerical failure
    Ok(if failed.iter().all(|c| c.errored) {
        EXIT_NUMERICAL
    } else {
        EXIT_VERIFICATION
    })
}

fn dispatch(cli: Cli) -> std::result::Result<i32, Failure> {
    match cli.command {
        Cmd::Eval { common, t } => cmd_eval(resolve(common, Command::Eval)?, t),
        Cmd::Sweep { common, times, grid } => cmd_sweep(resolve(common, Command::Sweep)?, times, grid),
        Cmd::Verify { common, suites } => cmd_verify(resolve(common, Command::Verify)?, suites),
    }
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("memvel: error: {}", f.message);
            f.code
        }
    }
}
