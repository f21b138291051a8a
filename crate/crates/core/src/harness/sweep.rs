use serde::{Deserialize, Serialize};

use super::{default_workers, round_wall_time, summarize, CellSummary, HarnessError, RunRecord};
use crate::benchmarks::{Benchmark, FunctionId};
use crate::error::SsoError;
use crate::layout::LayoutMode;
use crate::objective::Objective;
use crate::parallel::{Schedule, ScheduleKind};
use crate::params::SsoParams;
use crate::stats::{kruskal_wallis, mid_ranks, TestResult};

/// The six (cw, cp, cg) combinations of the original parameter study.
pub const TABLE_TRIPLES: [[f64; 3]; 6] = [
    [0.1, 0.3, 0.7],
    [0.1, 0.4, 0.8],
    [0.2, 0.4, 0.6],
    [0.2, 0.5, 0.9],
    [0.3, 0.4, 0.5],
    [0.3, 0.6, 0.8],
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub function: FunctionId,
    pub triples: Vec<[f64; 3]>,
    pub runs: usize,
    pub base_seed: u64,
    pub nsol: usize,
    pub nvar: usize,
    pub niter: usize,
    pub schedule: ScheduleKind,
    pub workers: usize,
    pub layout: LayoutMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let p = SsoParams::default();
        Self {
            function: FunctionId::F1,
            triples: TABLE_TRIPLES.to_vec(),
            runs: 20,
            base_seed: 0,
            nsol: p.nsol,
            nvar: p.nvar,
            niter: p.niter,
            schedule: ScheduleKind::Parallel,
            workers: default_workers(),
            layout: LayoutMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub triple: [f64; 3],
    pub records: Vec<RunRecord>,
    pub summary: CellSummary,
    /// Sum and mean of this combination's ranks within the pooled sample.
    pub rank_sum: f64,
    pub mean_rank: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub cells: Vec<SweepCell>,
    /// Kruskal–Wallis across combinations; `None` with fewer than two.
    pub kruskal: Option<TestResult>,
    pub diagnostics: Vec<String>,
}

/// Sweeps `config.triples` on the configured benchmark.
pub fn parameter_sweep(config: &SweepConfig) -> Result<SweepReport, HarnessError> {
    let bench = Benchmark::new_truncating(config.function, config.nvar)?;
    parameter_sweep_with(config, &bench, config.function.bounds())
}

/// Sweeps `config.triples` on an arbitrary objective over `bounds`.
/// Records are labelled with `config.function`.
pub fn parameter_sweep_with(
    config: &SweepConfig,
    f: &dyn Objective,
    bounds: (f64, f64),
) -> Result<SweepReport, HarnessError> {
    if config.triples.is_empty() {
        return Err(HarnessError::Config { key: "triples", message: "no combinations given".into() });
    }
    if config.runs == 0 {
        return Err(HarnessError::Config { key: "runs", message: "must be at least 1".into() });
    }
    let params: Vec<SsoParams> = config
        .triples
        .iter()
        .map(|&[cw, cp, cg]| {
            let p = SsoParams::default()
                .with_thresholds(cw, cp, cg)
                .with_bounds(bounds.0, bounds.1)
                .with_sizes(config.nsol, config.nvar, config.niter);
            p.validate().map(|_| p)
        })
        .collect::<Result<_, SsoError>>()
        .map_err(|e| HarnessError::Config { key: "triples", message: e.to_string() })?;

    let schedule = match config.schedule {
        ScheduleKind::Sequential => Schedule::SequentialAsync,
        ScheduleKind::Parallel => {
            if config.workers == 0 {
                return Err(HarnessError::Config { key: "workers", message: "must be at least 1".into() });
            }
            Schedule::ParallelSync { workers: config.workers, layout: config.layout }
        }
    };

    let mut groups: Vec<Vec<RunRecord>> = Vec::with_capacity(params.len());
    for p in &params {
        let mut records = Vec::with_capacity(config.runs);
        for run_id in 0..config.runs as u64 {
            let seed = config.base_seed + run_id;
            let outcome = schedule.run(p, f, seed)?;
            records.push(RunRecord {
                run_id,
                schedule: config.schedule,
                function_id: config.function,
                params: *p,
                seed,
                best_fitness: outcome.best_fitness,
                best_position: outcome.best_position,
                wall_time: round_wall_time(outcome.wall_time.as_secs_f64()),
                trajectory: None,
            });
        }
        groups.push(records);
    }

    let fitness: Vec<Vec<f64>> =
        groups.iter().map(|g| g.iter().map(|r| r.best_fitness).collect()).collect();
    let pooled: Vec<f64> = fitness.iter().flatten().copied().collect();
    let (ranks, _) = mid_ranks(&pooled);

    let mut diagnostics = Vec::new();
    let kruskal = if groups.len() < 2 {
        diagnostics.push("Kruskal–Wallis skipped: a single combination has nothing to compare".to_string());
        None
    } else {
        Some(kruskal_wallis(&fitness)?)
    };

    let mut offset = 0;
    let cells = config
        .triples
        .iter()
        .zip(groups)
        .map(|(&triple, records)| {
            let n = records.len();
            let rank_sum: f64 = ranks[offset..offset + n].iter().sum();
            offset += n;
            SweepCell {
                triple,
                summary: summarize(&records).remove(0),
                records,
                rank_sum,
                mean_rank: rank_sum / n as f64,
            }
        })
        .collect();
    Ok(SweepReport { cells, kruskal, diagnostics })
}
