//! `sausage` — command-line front end for the sausage-core laboratory.
//!
//! Four commands cover the workflow end to end:
//!
//! * `coeffs`     — closed-form coefficient tables as CSV,
//! * `verify-1d`  — the alternating-binomial transform consistency report,
//! * `experiment` — deterministic and Monte Carlo runs that write data
//!   files plus a summary JSON with formula-vs-fit pass/fail verdicts,
//! * `fit`        — half-power least squares over an existing sample file.
//!
//! Exit codes are CI-oriented: 0 all checks passed, 2 a numerical check
//! failed (artifacts are still written), 3 usage error, 4 resource or
//! partial failure (I/O, non-convergence, a work-capped Monte Carlo run).
//!
//! A `--config FILE` of `key = value` lines supplies defaults for any flag
//! (explicit flags win); `SAUSAGE_THREADS` supplies a default worker-thread
//! count the same way.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

mod experiments;
mod parse;
mod tables;

use parse::{BodySpec, FileConfig, IntRange, TimeGrid};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// What a completed command reports upward: whether every numerical check
/// it ran came in under tolerance. Commands without checks always `Pass`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Pass,
    CheckFailed,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed flags, config entries, or flag combinations (exit 3).
    #[error("{0}")]
    Usage(String),
    /// Anything the computational core reports (exit 4); partial Monte
    /// Carlo results land here after their artifacts are written.
    #[error(transparent)]
    Core(#[from] sausage_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) => EXIT_RESOURCE,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "sausage",
    version,
    about = "Small-time expansions of Wiener-sausage volumes and heat content: \
             coefficient tables, integral oracles, Monte Carlo runs, series fits",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for parallel sections (default: config file, then
    /// the SAUSAGE_THREADS environment variable, then all cores)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Defaults file with `key = value` lines mirroring the long flags;
    /// explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print coefficient tables as CSV (family,k,m,j,value,meta)
    Coeffs(CoeffsArgs),
    /// Check the pinned and half-space families against each other through
    /// the alternating binomial transform, both directions
    #[command(name = "verify-1d")]
    Verify1d(Verify1dArgs),
    /// Run a named experiment: write data files and a summary JSON with
    /// fitted-versus-formula pass/fail verdicts
    Experiment(ExperimentArgs),
    /// Weighted half-power fit over an existing sample file
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Half-space constants (dimensionless, exact rational path)
    Alpha,
    /// Sausage-volume expansion around a compact body
    C,
    /// Interior expansion from packaged geometric functionals (f ≡ 1)
    A,
    /// Exterior-ball expansion in dimension 3
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Inward,
    Outward,
}

impl OrientationArg {
    pub fn core(self) -> sausage_core::geometry::Orientation {
        match self {
            OrientationArg::Inward => sausage_core::geometry::Orientation::Inward,
            OrientationArg::Outward => sausage_core::geometry::Orientation::Outward,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OrientationArg::Inward => "inward",
            OrientationArg::Outward => "outward",
        }
    }
}

impl std::str::FromStr for OrientationArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    #[value(name = "per_proof")]
    PerProof,
    #[value(name = "as_printed")]
    AsPrinted,
    /// Print both conventions side by side (adjacent rows per (k, j))
    Both,
}

impl std::str::FromStr for NormalizationArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Distance to the sampled polyline only (biased low)
    Polyline,
    /// Polyline plus per-segment crossing correction
    #[value(name = "bridge_corrected")]
    BridgeCorrected,
}

impl ModeArg {
    pub fn core(self) -> sausage_core::montecarlo::BiasMode {
        match self {
            ModeArg::Polyline => sausage_core::montecarlo::BiasMode::Polyline,
            ModeArg::BridgeCorrected => sausage_core::montecarlo::BiasMode::BridgeCorrected,
        }
    }
}

impl std::str::FromStr for ModeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Jsonl,
    Csv,
}

impl std::str::FromStr for FormatArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, clap::Args)]
pub struct CoeffsArgs {
    /// Coefficient family
    #[arg(long, value_enum)]
    pub family: FamilyArg,

    /// k values, a single integer or an inclusive `lo..hi` range (k ≥ 1)
    #[arg(long)]
    pub k: Option<IntRange>,

    /// j values (default: 1..4 for alpha, 0..2 for the other families)
    #[arg(long)]
    pub j: Option<IntRange>,

    /// Body: ball:m:r, disk, circle:r, ellipse:a:b, or curve:<path>
    /// (required for the c, a, and b families)
    #[arg(long)]
    pub body: Option<BodySpec>,

    /// Boundary-curvature orientation for the c and a families
    /// (default: outward, the branch every cross-check in this crate selects)
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,

    /// b-family constant convention (default: both)
    #[arg(long, value_enum)]
    pub normalization: Option<NormalizationArg>,

    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct Verify1dArgs {
    /// Orders to check, comma separated, subset of 0,1,2 (default: all)
    #[arg(long, value_delimiter = ',')]
    pub j: Vec<u32>,

    /// Largest intersection count to drive the transform to (1..=12;
    /// the order-t comparison caps itself at k = 8)
    #[arg(long = "k-max")]
    pub k_max: Option<u32>,
}

#[derive(Debug, clap::Args)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    pub which: ExperimentCmd,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCmd {
    /// Exact exterior-ball values Q_k(t) on a t grid, fitted against the
    /// closed-form coefficient family
    QExact(QExactArgs),
    /// Monte Carlo estimate of the free-motion sausage volume, checked
    /// against the exact oracle (and the pair identity at k = 2)
    QMc(McArgs),
    /// Monte Carlo estimate of the pinned (bridge) sausage volume, checked
    /// against the three-term small-t prediction
    ZMc(McArgs),
    /// Planar boundary-layer values on a t grid, fitted and compared with
    /// the coefficient family under both curvature orientations
    ZPlanar(ZPlanarArgs),
}

#[derive(Debug, clap::Args)]
pub struct QExactArgs {
    /// Intersection count (default 1)
    #[arg(long)]
    pub k: Option<u32>,

    /// Geometric t grid `lo:hi:n` (default 1e-5:1e-3:12)
    #[arg(long)]
    pub tgrid: Option<TimeGrid>,

    /// Quadrature tolerance for the exact values (default 1e-12)
    #[arg(long)]
    pub tol: Option<f64>,

    /// Highest half-power t^{j/2} in the fit basis (default 4; the extra
    /// column absorbs t² contamination of the order-t coefficient)
    #[arg(long)]
    pub jmax: Option<u32>,

    /// Directory for the data and summary files (default: current)
    #[arg(long = "out-dir", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct McArgs {
    /// Number of independent sausages that must all cover a point (default 1)
    #[arg(long)]
    pub k: Option<u32>,

    /// Ambient dimension (default 3 for q-mc, 2 for z-mc)
    #[arg(long)]
    pub m: Option<u32>,

    /// Path duration (default 0.02 for q-mc, 0.01 for z-mc)
    #[arg(long)]
    pub t: Option<f64>,

    /// Body spec (default ball:3:1 for q-mc, disk for z-mc)
    #[arg(long)]
    pub body: Option<BodySpec>,

    /// Independent replicas; the standard error comes from their spread
    /// (default 512)
    #[arg(long)]
    pub replicas: Option<u32>,

    /// Segments per path (default 512)
    #[arg(long)]
    pub steps: Option<u32>,

    /// Uniform test points per replica (default 256 for q-mc, 1024 for z-mc)
    #[arg(long)]
    pub points: Option<u32>,

    /// Base RNG seed; equal seeds reproduce means bit for bit (default 1)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Coverage rule (default bridge_corrected)
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,

    /// Jittered-grid stratification of the test points
    #[arg(long)]
    pub stratified: bool,

    /// Multiplier ≥ 1 on the sampling-box half-width; estimates must not
    /// depend on it (default 1)
    #[arg(long = "box-inflation")]
    pub box_inflation: Option<f64>,

    /// Force the sequential execution path (bit-identical to parallel)
    #[arg(long)]
    pub sequential: bool,

    /// Cap on total work units; a cap below the requested replicas yields
    /// a partial run: artifacts are written and the exit code is 4
    #[arg(long = "max-work")]
    pub max_work: Option<u64>,

    /// Directory for the data and summary files (default: current)
    #[arg(long = "out-dir", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ZPlanarArgs {
    /// Number of independent sausages (default 2)
    #[arg(long)]
    pub k: Option<u32>,

    /// Planar body: disk, circle:r, ellipse:a:b, or curve:<path>
    /// (default disk)
    #[arg(long)]
    pub body: Option<BodySpec>,

    /// Geometric t grid `lo:hi:n` (default 2.5e-5:4e-4:12)
    #[arg(long)]
    pub tgrid: Option<TimeGrid>,

    /// Highest half-power t^{j/2} in the fit basis (default 3)
    #[arg(long)]
    pub jmax: Option<u32>,

    /// Collar-depth exponent ε ∈ (2/5, 1/2): evaluate the literal t^ε cut
    /// instead of the fully decayed collar, exposing the truncation bias
    #[arg(long)]
    pub eps: Option<f64>,

    /// Directory for the data and summary files (default: current)
    #[arg(long = "out-dir", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct FitArgs {
    /// Sample file: JSON lines with t and value/mean (stderr optional), or
    /// CSV rows `t,value[,stderr]`
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,

    /// Input format (default: inferred from the file extension)
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,

    /// Highest half-power t^{j/2} in the fit basis (default 3)
    #[arg(long)]
    pub jmax: Option<u32>,

    /// Write a JSON record of the fit here as well
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn main() {
    // Die quietly when the read end of a pipe closes (`sausage … | head`),
    // like any other filter, instead of panicking mid-println.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run_cli());
}

fn run_cli() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };

    match dispatch(cli) {
        Ok(RunStatus::Pass) => EXIT_PASS,
        Ok(RunStatus::CheckFailed) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<RunStatus, CliError> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::empty(),
    };

    configure_threads(cli.threads, &cfg)?;

    match cli.command {
        Command::Coeffs(args) => tables::cmd_coeffs(&args, &cfg),
        Command::Verify1d(args) => tables::cmd_verify_1d(&args, &cfg),
        Command::Experiment(args) => match args.which {
            ExperimentCmd::QExact(a) => experiments::cmd_q_exact(&a, &cfg),
            ExperimentCmd::QMc(a) => experiments::cmd_q_mc(&a, &cfg),
            ExperimentCmd::ZMc(a) => experiments::cmd_z_mc(&a, &cfg),
            ExperimentCmd::ZPlanar(a) => experiments::cmd_z_planar(&a, &cfg),
        },
        Command::Fit(args) => experiments::cmd_fit(&args, &cfg),
    }
}

/// Thread-count precedence: flag, config key `threads`, SAUSAGE_THREADS.
/// When none is given the library keeps its own default (all cores).
fn configure_threads(flag: Option<usize>, cfg: &FileConfig) -> Result<(), CliError> {
    let mut threads = cfg.resolve_opt(flag, "threads")?;
    if threads.is_none() {
        if let Ok(raw) = std::env::var("SAUSAGE_THREADS") {
            let n = raw.parse::<usize>().map_err(|_| {
                CliError::Usage(format!("SAUSAGE_THREADS=\"{raw}\" is not a thread count"))
            })?;
            threads = Some(n);
        }
    }
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("thread count must be at least 1".into()));
        }
        if let Err(msg) = sausage_core::set_thread_count(n) {
            // Harmless when a pool already exists (e.g. repeated in-process
            // calls under a test harness); results do not depend on it.
            eprintln!("warning: could not resize the thread pool: {msg}");
        }
    }
    Ok(())
}
