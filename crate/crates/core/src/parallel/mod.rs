//! Synchronous (phased) SSO on a pool of worker threads.
//!
//! Every iteration runs search for all particles, then evaluation, then the
//! personal-best update, then the global-best reduction, with a barrier
//! between phases. Workers own disjoint particle blocks; the global best is
//! read from a snapshot during search and only written by the reduction.
//! Random deviates are keyed per coordinate, so the result does not depend
//! on the worker count.

mod partition;
mod phases;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Barrier, Mutex, RwLock};
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SsoError};
use crate::layout::LayoutMode;
use crate::objective::Objective;
use crate::params::SsoParams;
use crate::rng::{DrawCount, RngStream};
use crate::sequential::{run_sequential, RunOutcome};
use crate::swarm::{init_draws, initialize, BranchCounts};

pub use phases::{
    evaluate_phase, iterate, search_phase, search_phase_counted, update_gbest_phase,
    update_pbests_phase,
};

use partition::{merge, non_finite, split, Candidate};

/// Which execution flow a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// Per-particle interleaving; gBest changes are visible immediately.
    Sequential,
    /// Barrier-separated phases; gBest changes are visible next iteration.
    Parallel,
}

impl ScheduleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::Sequential => "sequential",
            ScheduleKind::Parallel => "parallel",
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScheduleKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sequential" => Ok(ScheduleKind::Sequential),
            "parallel" => Ok(ScheduleKind::Parallel),
            other => Err(format!("unknown schedule `{other}` (expected sequential or parallel)")),
        }
    }
}

/// A schedule together with its execution settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    SequentialAsync,
    ParallelSync { workers: usize, layout: LayoutMode },
}

impl Schedule {
    pub fn kind(&self) -> ScheduleKind {
        match self {
            Schedule::SequentialAsync => ScheduleKind::Sequential,
            Schedule::ParallelSync { .. } => ScheduleKind::Parallel,
        }
    }

    pub fn run(&self, params: &SsoParams, f: &dyn Objective, seed: u64) -> Result<RunOutcome> {
        match *self {
            Schedule::SequentialAsync => run_sequential(params, f, seed),
            Schedule::ParallelSync { workers, layout } => run_parallel(params, f, seed, workers, layout),
        }
    }
}

struct LocalBest {
    candidate: Option<Candidate>,
    row: Vec<f64>,
}

struct Shared {
    /// Global best position and fitness.
    gbest: RwLock<(Vec<f64>, f64)>,
    locals: Vec<Mutex<LocalBest>>,
    abort: AtomicBool,
    failure: Mutex<Option<(usize, f64, usize)>>,
    trajectory: Mutex<Vec<f64>>,
}

/// Runs the synchronous schedule with `workers` threads.
///
/// The outcome (apart from wall time) depends only on `params`, `f`, `seed`
/// and is identical for every worker count and layout.
pub fn run_parallel(
    params: &SsoParams,
    f: &dyn Objective,
    seed: u64,
    workers: usize,
    layout: LayoutMode,
) -> Result<RunOutcome> {
    if workers == 0 {
        return Err(SsoError::NoWorkers);
    }
    let rng = RngStream::new(seed);
    let swarm = initialize(params, f, &rng)?;
    let split = split(swarm, workers, layout);
    let mut parts = split.parts;
    let nvar = params.nvar;

    let shared = Shared {
        gbest: RwLock::new((split.gbest, split.g_f)),
        locals: (0..parts.len())
            .map(|_| Mutex::new(LocalBest { candidate: None, row: vec![0.0; nvar] }))
            .collect(),
        abort: AtomicBool::new(false),
        failure: Mutex::new(None),
        trajectory: Mutex::new(Vec::with_capacity(params.niter)),
    };
    let barrier = Barrier::new(parts.len());

    let start = Instant::now();
    let tallies: Vec<(DrawCount, BranchCounts)> = thread::scope(|s| {
        let handles: Vec<_> = parts
            .iter_mut()
            .enumerate()
            .map(|(w, part)| {
                let (shared, barrier, rng) = (&shared, &barrier, &rng);
                s.spawn(move || {
                    let mut draws = DrawCount::default();
                    let mut branches = BranchCounts::default();
                    for t in 0..params.niter {
                        // search
                        {
                            let g = shared.gbest.read().expect("gbest lock");
                            part.search(&g.0, t, params, rng, &mut draws, &mut branches);
                        }
                        barrier.wait();

                        // evaluate
                        if let Err((particle, value)) = part.evaluate(f) {
                            let mut failure = shared.failure.lock().expect("failure lock");
                            if failure.is_none_or(|(_, _, p)| particle < p) {
                                *failure = Some((t, value, particle));
                            }
                            shared.abort.store(true, Ordering::SeqCst);
                        }
                        barrier.wait();
                        if shared.abort.load(Ordering::SeqCst) {
                            break;
                        }

                        // personal bests, then publish the block winner
                        part.update_pbests();
                        {
                            let mut local = shared.locals[w].lock().expect("local lock");
                            local.candidate = part.local_best();
                            if let Some(c) = local.candidate {
                                part.pbest_row_into(c.particle, &mut local.row);
                            }
                        }
                        if barrier.wait().is_leader() {
                            reduce_into_gbest(shared);
                        }

                        // global best visible to everyone from here on
                        barrier.wait();
                    }
                    (draws, branches)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let wall_time = start.elapsed();

    if let Some((iteration, value, particle)) = *shared.failure.lock().expect("failure lock") {
        return Err(non_finite(Some(iteration), (particle, value)));
    }

    let mut draws = init_draws(params);
    let mut branches = BranchCounts::default();
    for (d, b) in tallies {
        draws += d;
        branches += b;
    }
    let (gbest, g_f) = shared.gbest.into_inner().expect("gbest lock");
    let trajectory = shared.trajectory.into_inner().expect("trajectory lock");
    let swarm = merge(parts, gbest, g_f, layout);
    Ok(RunOutcome {
        best_fitness: swarm.g_f(),
        best_position: swarm.gbest().to_vec(),
        trajectory,
        wall_time,
        draws,
        branches,
    })
}

fn reduce_into_gbest(shared: &Shared) {
    let locals: Vec<_> = shared.locals.iter().map(|l| l.lock().expect("local lock")).collect();
    let winner = phases::reduce(locals.iter().filter_map(|l| l.candidate));
    let mut g = shared.gbest.write().expect("gbest lock");
    if let Some(w) = winner {
        if w.fitness <= g.1 {
            let owner = locals
                .iter()
                .find(|l| l.candidate == Some(w))
                .expect("winner came from a block");
            g.0.copy_from_slice(&owner.row);
            g.1 = w.fitness;
        }
    }
    shared.trajectory.lock().expect("trajectory lock").push(g.1);
}
