//! Sequential SSO: each particle searches, is evaluated and updates the
//! personal and global bests before the next particle moves, so later
//! particles in an iteration already see improvements made by earlier ones.

use std::time::{Duration, Instant};

use crate::error::{Result, SsoError};
use crate::objective::Objective;
use crate::params::SsoParams;
use crate::rng::{DrawCount, RngStream};
use crate::swarm::{evaluate_row, init_draws, initialize, search_row, BranchCounts, Swarm};

/// Result of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub best_fitness: f64,
    pub best_position: Vec<f64>,
    /// Global-best fitness after each iteration.
    pub trajectory: Vec<f64>,
    /// Wall time of the iteration loop (initialization excluded).
    pub wall_time: Duration,
    pub draws: DrawCount,
    pub branches: BranchCounts,
}

impl RunOutcome {
    /// Equality ignoring wall time, with floats compared bit for bit.
    pub fn same_result(&self, other: &RunOutcome) -> bool {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        self.best_fitness.to_bits() == other.best_fitness.to_bits()
            && bits(&self.best_position) == bits(&other.best_position)
            && bits(&self.trajectory) == bits(&other.trajectory)
            && self.draws == other.draws
            && self.branches == other.branches
    }
}

/// Steps a swarm one iteration at a time under the sequential schedule.
pub struct SequentialRunner<'a> {
    params: SsoParams,
    f: &'a dyn Objective,
    rng: RngStream,
    swarm: Swarm,
    iteration: usize,
    draws: DrawCount,
    branches: BranchCounts,
}

impl<'a> SequentialRunner<'a> {
    pub fn new(params: SsoParams, f: &'a dyn Objective, seed: u64) -> Result<Self> {
        let rng = RngStream::new(seed);
        let swarm = initialize(&params, f, &rng)?;
        Ok(Self {
            draws: init_draws(&params),
            params,
            f,
            rng,
            swarm,
            iteration: 0,
            branches: BranchCounts::default(),
        })
    }

    pub fn swarm(&self) -> &Swarm {
        &self.swarm
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn is_done(&self) -> bool {
        self.iteration >= self.params.niter
    }

    pub fn draws(&self) -> DrawCount {
        self.draws
    }

    pub fn branches(&self) -> BranchCounts {
        self.branches
    }

    /// Runs one full iteration over all particles in index order and
    /// returns the global-best fitness afterwards.
    pub fn step(&mut self) -> Result<f64> {
        let t = self.iteration;
        let Swarm { sol, pbests, gbest, sol_f, p_f, g_f } = &mut self.swarm;
        let mut scratch = vec![0.0; gbest.len()];
        for i in 0..sol.rows() {
            search_row(
                sol,
                pbests,
                i,
                gbest,
                i,
                t,
                &self.params,
                &self.rng,
                &mut self.draws,
                &mut self.branches,
            );
            let value = evaluate_row(self.f, sol, i, &mut scratch);
            if !value.is_finite() {
                return Err(SsoError::NonFiniteFitness { iteration: t, particle: i, value });
            }
            sol_f[i] = value;
            if sol_f[i] <= p_f[i] {
                pbests.copy_row_from(i, sol, i);
                p_f[i] = sol_f[i];
            }
            if p_f[i] <= *g_f {
                pbests.copy_row_into(i, gbest);
                *g_f = p_f[i];
            }
        }
        self.iteration += 1;
        Ok(*g_f)
    }

    pub fn into_swarm(self) -> Swarm {
        self.swarm
    }
}

/// Runs `params.niter` iterations of the sequential schedule.
pub fn run_sequential(params: &SsoParams, f: &dyn Objective, seed: u64) -> Result<RunOutcome> {
    let mut runner = SequentialRunner::new(*params, f, seed)?;
    let mut trajectory = Vec::with_capacity(params.niter);
    let start = Instant::now();
    while !runner.is_done() {
        trajectory.push(runner.step()?);
    }
    let wall_time = start.elapsed();
    let draws = runner.draws();
    let branches = runner.branches();
    let swarm = runner.into_swarm();
    Ok(RunOutcome {
        best_fitness: swarm.g_f,
        best_position: swarm.gbest,
        trajectory,
        wall_time,
        draws,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::sphere;

    #[test]
    fn keep_branch_only_never_moves() {
        let params = SsoParams::default().with_sizes(1, 1, 1).with_thresholds(1.0, 1.0, 1.0);
        let rng = RngStream::new(9);
        let init = initialize(&params, &sphere, &rng).unwrap();
        let out = run_sequential(&params, &sphere, 9).unwrap();
        assert_eq!(out.best_fitness, init.g_f());
        assert_eq!(out.best_position, init.gbest());
        assert_eq!(out.trajectory, vec![init.g_f()]);
    }

    #[test]
    fn trajectory_is_non_increasing() {
        let params = SsoParams::default().with_sizes(20, 10, 200);
        let out = run_sequential(&params, &sphere, 4).unwrap();
        assert_eq!(out.trajectory.len(), 200);
        assert!(out.trajectory.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*out.trajectory.last().unwrap(), out.best_fitness);
    }

    #[test]
    fn invariants_hold_after_every_iteration() {
        let params = SsoParams::default().with_sizes(15, 6, 60);
        let mut runner = SequentialRunner::new(params, &sphere, 77).unwrap();
        while !runner.is_done() {
            runner.step().unwrap();
            let problems = runner.swarm().invariant_violations(&params, &sphere);
            assert!(problems.is_empty(), "iteration {}: {problems:?}", runner.iteration());
        }
    }

    #[test]
    fn identical_inputs_give_identical_runs() {
        let params = SsoParams::default().with_sizes(30, 8, 50);
        let a = run_sequential(&params, &sphere, 5).unwrap();
        let b = run_sequential(&params, &sphere, 5).unwrap();
        assert!(a.same_result(&b));
    }

    #[test]
    fn draw_budget_matches_problem_size() {
        let params = SsoParams::default().with_sizes(7, 5, 11);
        let out = run_sequential(&params, &sphere, 1).unwrap();
        assert_eq!(out.draws.branch, 7 * 5 * 11);
        assert_eq!(out.draws.init, 7 * 5);
        assert_eq!(out.draws.fresh, out.branches.get(crate::step::Branch::Fresh));
    }

    #[test]
    fn non_finite_fitness_reports_coordinates() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let params = SsoParams::default().with_sizes(8, 3, 50);
        let calls = AtomicUsize::new(0);
        let f = |_: &[f64]| if calls.fetch_add(1, Ordering::SeqCst) >= 28 { f64::NAN } else { 0.0 };
        let err = run_sequential(&params, &f, 2).unwrap_err();
        assert!(matches!(err, SsoError::NonFiniteFitness { iteration: 2, particle: 4, .. }));
    }
}
