//! `sso`: run swarm optimization experiments and analyse their results.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 when a run or file
//! operation fails, 3 when `--strict` is given and a statistic is degenerate.

mod analysis;
mod config;
mod experiment;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sso", version, about = "Simplified swarm optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Repeated independent runs per function and schedule.
    Run(RunArgs),
    /// Compare (cw, cp, cg) combinations with a Kruskal–Wallis test.
    Sweep(SweepArgs),
    /// Speedup and paired precision test between two result files.
    Compare(CompareArgs),
    /// Hypothesis tests on a result file.
    Stats(StatsArgs),
    /// Plot-ready columns from a result file.
    PlotData(PlotArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated ids (f1..f9) or `all`.
    #[arg(long)]
    pub function: Option<String>,
    /// `sequential`, `parallel`, or a comma-separated list of both.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub nsol: Option<usize>,
    #[arg(long)]
    pub nvar: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub cw: Option<f64>,
    #[arg(long)]
    pub cp: Option<f64>,
    #[arg(long)]
    pub cg: Option<f64>,
    /// Base seed; run `i` uses `seed + i`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub runs: Option<usize>,
    /// `particle-major` or `interleaved`.
    #[arg(long)]
    pub layout: Option<String>,
    /// Results CSV. A `.trajectory.csv` file is written beside it with `--trajectory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the global-best fitness of every iteration.
    #[arg(long)]
    pub trajectory: bool,
    /// Run cells concurrently (timings become contended).
    #[arg(long)]
    pub parallel_cells: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub function: Option<String>,
    /// File with one `cw,cp,cg` line per combination, or `builtin`.
    #[arg(long)]
    pub triples: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub nsol: Option<usize>,
    #[arg(long)]
    pub nvar: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub layout: Option<String>,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Results of implementation A (the baseline).
    pub a: PathBuf,
    /// Results of implementation B.
    pub b: PathBuf,
    #[arg(long, default_value_t = sso_core::harness::DEFAULT_POWER_A)]
    pub power_a: f64,
    #[arg(long, default_value_t = sso_core::harness::DEFAULT_POWER_B)]
    pub power_b: f64,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Kruskal,
    Friedman,
    Bartlett,
    Levene,
    Ttest,
    Normality,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub test: TestKind,
    /// Comma-separated columns whose values define the groups.
    #[arg(long, default_value = "schedule")]
    pub group_by: String,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `trajectory`, `precision-box` or `speedup-curve`.
    #[arg(long)]
    pub kind: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
    Degenerate(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Runtime(_) => 2,
            Failure::Degenerate(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

pub fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow::anyhow!("{msg}"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => experiment::run(a),
        Command::Sweep(a) => experiment::sweep(a),
        Command::Compare(a) => analysis::compare(a),
        Command::Stats(a) => analysis::stats(a),
        Command::PlotData(a) => analysis::plot_data(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) => eprintln!("error: {e:#}"),
                Failure::Runtime(e) => eprintln!("error: {e:#}"),
                Failure::Degenerate(m) => eprintln!("error: degenerate result under --strict: {m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
