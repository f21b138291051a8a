//! Experiment driver: repeated seeded runs per (function, schedule) cell,
//! per-cell summaries, CSV persistence, speedup arithmetic, parameter sweeps
//! and plot-ready data.

mod io;
mod plot;
mod speedup;
mod sweep;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use log::{info, warn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benchmarks::{Benchmark, BenchmarkError, FunctionId};
use crate::error::SsoError;
use crate::layout::LayoutMode;
use crate::parallel::{Schedule, ScheduleKind};
use crate::params::SsoParams;
use crate::stats::StatsError;

pub use io::{read_csv, read_report, trajectory_path, write_csv, write_report, write_summary, CsvContents};
pub use plot::{emit_plot_data, PlotKind};
pub use speedup::{compute_speedup, speedup_curve, SpeedupReport, DEFAULT_POWER_A, DEFAULT_POWER_B};
pub use sweep::{parameter_sweep, parameter_sweep_with, SweepCell, SweepConfig, SweepReport, TABLE_TRIPLES};

/// Column header of every results CSV.
pub const CSV_HEADER: &str = "run_id,schedule,function,nsol,nvar,niter,cw,cp,cg,seed,best_fitness,wall_time_s";

/// Thread-block size of the reference GPU runs. Kept as metadata only.
pub const BLOCK_SIZE: usize = 1024;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid `{key}`: {message}")]
    Config { key: &'static str, message: String },
    #[error(transparent)]
    Sso(#[from] SsoError),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{what}: time {value} is not positive")]
    NonPositiveTime { what: &'static str, value: f64 },
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("run {run_id} ({schedule}, {function}) has no trajectory")]
    MissingTrajectory { run_id: u64, schedule: ScheduleKind, function: FunctionId },
    #[error("{0}")]
    Data(String),
}

fn config_error(key: &'static str, message: impl Into<String>) -> HarnessError {
    HarnessError::Config { key, message: message.into() }
}

/// Settings of a repeated-run experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub functions: Vec<FunctionId>,
    pub schedules: Vec<ScheduleKind>,
    pub runs: usize,
    pub base_seed: u64,
    pub nsol: usize,
    pub nvar: usize,
    pub niter: usize,
    pub cw: f64,
    pub cp: f64,
    pub cg: f64,
    /// Threads used by the parallel schedule.
    pub workers: usize,
    pub layout: LayoutMode,
    pub record_trajectory: bool,
    /// Run cells concurrently. Timings are then contended and should not be
    /// used for speedup figures.
    pub parallel_cells: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let p = SsoParams::default();
        Self {
            functions: vec![FunctionId::F1],
            schedules: vec![ScheduleKind::Sequential, ScheduleKind::Parallel],
            runs: 20,
            base_seed: 0,
            nsol: p.nsol,
            nvar: p.nvar,
            niter: p.niter,
            cw: p.cw,
            cp: p.cp,
            cg: p.cg,
            workers: default_workers(),
            layout: LayoutMode::default(),
            record_trajectory: false,
            parallel_cells: false,
        }
    }
}

pub fn default_workers() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.functions.is_empty() {
            return Err(config_error("functions", "at least one function is required"));
        }
        if self.schedules.is_empty() {
            return Err(config_error("schedules", "at least one schedule is required"));
        }
        if self.runs == 0 {
            return Err(config_error("runs", "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(config_error("workers", "must be at least 1"));
        }
        if self.base_seed.checked_add(self.runs as u64).is_none() {
            return Err(config_error("base_seed", "base_seed + runs overflows"));
        }
        for id in &self.functions {
            self.benchmark(*id)?;
            self.params_for(*id).validate().map_err(|e| match e {
                SsoError::InvalidParams(m) => config_error(param_key(&m), m),
                other => HarnessError::Sso(other),
            })?;
        }
        Ok(())
    }

    /// Run constants for `id`, with the bounds taken from the function.
    pub fn params_for(&self, id: FunctionId) -> SsoParams {
        let (lo, hi) = id.bounds();
        SsoParams::default()
            .with_thresholds(self.cw, self.cp, self.cg)
            .with_bounds(lo, hi)
            .with_sizes(self.nsol, self.nvar, self.niter)
    }

    /// f8 at a dimension not divisible by 4 evaluates the leading groups only.
    pub fn benchmark(&self, id: FunctionId) -> Result<Benchmark, HarnessError> {
        Benchmark::new_truncating(id, self.nvar).map_err(|e| match e {
            BenchmarkError::ZeroDimension => config_error("nvar", e.to_string()),
            other => HarnessError::Benchmark(other),
        })
    }

    pub fn schedule(&self, kind: ScheduleKind) -> Schedule {
        match kind {
            ScheduleKind::Sequential => Schedule::SequentialAsync,
            ScheduleKind::Parallel => Schedule::ParallelSync { workers: self.workers, layout: self.layout },
        }
    }

    /// Descriptive key/value pairs written alongside the results.
    pub fn metadata(&self) -> Vec<(String, String)> {
        vec![
            ("runs".into(), self.runs.to_string()),
            ("base_seed".into(), self.base_seed.to_string()),
            ("workers".into(), self.workers.to_string()),
            ("layout".into(), self.layout.to_string()),
            ("block_size".into(), BLOCK_SIZE.to_string()),
            ("rng".into(), "philox4x32-10".into()),
            ("timing".into(), "iteration loop only, monotonic clock, microseconds".into()),
            ("parallel_cells".into(), self.parallel_cells.to_string()),
        ]
    }
}

// Map a parameter validation message back to the config key it concerns.
fn param_key(message: &str) -> &'static str {
    for key in ["cw", "cp", "cg", "nsol", "nvar", "niter"] {
        if message.contains(key) {
            return key;
        }
    }
    "params"
}

/// One completed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: u64,
    pub schedule: ScheduleKind,
    pub function_id: FunctionId,
    pub params: SsoParams,
    pub seed: u64,
    pub best_fitness: f64,
    /// Not persisted in the CSV; empty for records read back from disk.
    pub best_position: Vec<f64>,
    /// Seconds, rounded to microseconds, never below one microsecond.
    pub wall_time: f64,
    pub trajectory: Option<Vec<f64>>,
}

/// Rounds to whole microseconds with a floor of one microsecond.
pub fn round_wall_time(seconds: f64) -> f64 {
    ((seconds * 1e6).round() / 1e6).max(1e-6)
}

/// Avg./Std./Min. of one (function, schedule) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub function_id: FunctionId,
    pub schedule: ScheduleKind,
    pub nsol: usize,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; `None` for a single run.
    pub std: Option<f64>,
    pub min: f64,
    pub mean_wall_time: f64,
}

/// Where an experiment stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub function_id: FunctionId,
    pub schedule: ScheduleKind,
    pub run_id: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
    pub summary: Vec<CellSummary>,
    pub failure: Option<Failure>,
}

/// Groups `records` by (function, schedule, nsol) in order of first
/// appearance and summarizes best fitness and wall time.
pub fn summarize(records: &[RunRecord]) -> Vec<CellSummary> {
    let mut keys: Vec<(FunctionId, ScheduleKind, usize)> = Vec::new();
    for r in records {
        let key = (r.function_id, r.schedule, r.params.nsol);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(function_id, schedule, nsol)| {
            let cell: Vec<&RunRecord> = records
                .iter()
                .filter(|r| (r.function_id, r.schedule, r.params.nsol) == (function_id, schedule, nsol))
                .collect();
            let fit: Vec<f64> = cell.iter().map(|r| r.best_fitness).collect();
            let n = fit.len();
            let mean = fit.iter().sum::<f64>() / n as f64;
            let std = (n > 1).then(|| {
                (fit.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
            });
            CellSummary {
                function_id,
                schedule,
                nsol,
                n,
                mean,
                std,
                min: fit.iter().copied().fold(f64::INFINITY, f64::min),
                mean_wall_time: cell.iter().map(|r| r.wall_time).sum::<f64>() / n as f64,
            }
        })
        .collect()
}

struct Cell {
    function_id: FunctionId,
    schedule: ScheduleKind,
    run_id: u64,
}

fn run_cell(config: &ExperimentConfig, cell: &Cell) -> Result<RunRecord, HarnessError> {
    let params = config.params_for(cell.function_id);
    let bench = config.benchmark(cell.function_id)?;
    let seed = config.base_seed + cell.run_id;
    let outcome = config.schedule(cell.schedule).run(&params, &bench, seed)?;
    Ok(RunRecord {
        run_id: cell.run_id,
        schedule: cell.schedule,
        function_id: cell.function_id,
        params,
        seed,
        best_fitness: outcome.best_fitness,
        best_position: outcome.best_position,
        wall_time: round_wall_time(outcome.wall_time.as_secs_f64()),
        trajectory: config.record_trajectory.then_some(outcome.trajectory),
    })
}

/// Runs every (function, schedule, run) cell of `config`.
///
/// Invalid settings are returned as errors before anything runs. A run that
/// fails part-way stops the experiment; the records completed before it are
/// kept and the report carries the failure.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let mut cells = Vec::new();
    for &function_id in &config.functions {
        for &schedule in &config.schedules {
            for run_id in 0..config.runs as u64 {
                cells.push(Cell { function_id, schedule, run_id });
            }
        }
    }
    let results: Vec<Result<RunRecord, HarnessError>> = if config.parallel_cells {
        run_cells_concurrently(config, &cells)
    } else {
        let mut out = Vec::with_capacity(cells.len());
        for cell in &cells {
            let r = run_cell(config, cell);
            let failed = r.is_err();
            out.push(r);
            if failed {
                break;
            }
        }
        out
    };

    let mut records = Vec::with_capacity(results.len());
    let mut failure = None;
    for (cell, result) in cells.iter().zip(results) {
        match result {
            Ok(r) => {
                info!("{} {} run {}: {}", r.function_id, r.schedule, r.run_id, r.best_fitness);
                records.push(r);
            }
            Err(e) => {
                warn!("{} {} run {} failed: {e}", cell.function_id, cell.schedule, cell.run_id);
                failure = Some(Failure {
                    function_id: cell.function_id,
                    schedule: cell.schedule,
                    run_id: cell.run_id,
                    message: e.to_string(),
                });
                break;
            }
        }
    }
    Ok(ExperimentReport {
        config: config.clone(),
        summary: summarize(&records),
        records,
        failure,
    })
}

fn run_cells_concurrently(config: &ExperimentConfig, cells: &[Cell]) -> Vec<Result<RunRecord, HarnessError>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RunRecord, HarnessError>>>> =
        cells.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|s| {
        for _ in 0..default_workers().min(cells.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let r = run_cell(config, &cells[i]);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every cell visited"))
        .collect()
}
