//! The four phases of the synchronous schedule as standalone operations.
//!
//! Each phase splits the swarm into per-worker blocks, runs the block kernel
//! on scoped threads and joins (the join is the barrier). [`super::run_parallel`]
//! keeps its workers alive across iterations instead; both paths use the
//! same block kernels.

use std::thread;

use crate::error::{Result, SsoError};
use crate::objective::Objective;
use crate::params::SsoParams;
use crate::rng::{DrawCount, RngStream};
use crate::swarm::{BranchCounts, Swarm};

use super::partition::{merge, non_finite, split, Candidate, Partition};

fn on_blocks<R, F>(parts: &mut [Partition], op: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut Partition) -> R + Sync,
{
    if parts.len() <= 1 {
        return parts.iter_mut().map(&op).collect();
    }
    thread::scope(|s| {
        let handles: Vec<_> = parts.iter_mut().map(|p| s.spawn(|| op(p))).collect();
        handles.into_iter().map(|h| h.join().expect("phase worker panicked")).collect()
    })
}

fn check_workers(workers: usize) -> Result<()> {
    if workers == 0 {
        Err(SsoError::NoWorkers)
    } else {
        Ok(())
    }
}

/// Replaces every coordinate using the step update, reading personal and
/// global bests as they were when the phase started.
pub fn search_phase(
    swarm: Swarm,
    params: &SsoParams,
    rng: &RngStream,
    iteration: usize,
    workers: usize,
) -> Result<Swarm> {
    search_phase_counted(swarm, params, rng, iteration, workers).map(|(s, _, _)| s)
}

/// [`search_phase`] that also reports the deviates and branches consumed.
pub fn search_phase_counted(
    swarm: Swarm,
    params: &SsoParams,
    rng: &RngStream,
    iteration: usize,
    workers: usize,
) -> Result<(Swarm, DrawCount, BranchCounts)> {
    check_workers(workers)?;
    params.validate()?;
    if swarm.nsol() != params.nsol || swarm.nvar() != params.nvar {
        return Err(SsoError::DimensionMismatch {
            expected: params.nsol * params.nvar,
            found: swarm.nsol() * swarm.nvar(),
        });
    }
    let layout = swarm.layout();
    let mut s = split(swarm, workers, layout);
    let gbest = s.gbest.clone();
    let tallies = on_blocks(&mut s.parts, |p| {
        let mut draws = DrawCount::default();
        let mut branches = BranchCounts::default();
        p.search(&gbest, iteration, params, rng, &mut draws, &mut branches);
        (draws, branches)
    });
    let mut draws = DrawCount::default();
    let mut branches = BranchCounts::default();
    for (d, b) in tallies {
        draws += d;
        branches += b;
    }
    Ok((merge(s.parts, s.gbest, s.g_f, layout), draws, branches))
}

/// Recomputes `sol_f` for every particle. Nothing else changes.
pub fn evaluate_phase(swarm: Swarm, f: &dyn Objective, workers: usize) -> Result<Swarm> {
    check_workers(workers)?;
    let layout = swarm.layout();
    let mut s = split(swarm, workers, layout);
    let results = on_blocks(&mut s.parts, |p| p.evaluate(f));
    if let Some(bad) = results.into_iter().filter_map(|r| r.err()).min_by_key(|&(i, _)| i) {
        return Err(non_finite(None, bad));
    }
    Ok(merge(s.parts, s.gbest, s.g_f, layout))
}

/// Replaces each personal best whose particle is now at least as good.
pub fn update_pbests_phase(swarm: Swarm, workers: usize) -> Result<Swarm> {
    check_workers(workers)?;
    let layout = swarm.layout();
    let mut s = split(swarm, workers, layout);
    on_blocks(&mut s.parts, Partition::update_pbests);
    Ok(merge(s.parts, s.gbest, s.g_f, layout))
}

/// Min-reduces personal bests by `(fitness, index)` and adopts the winner
/// when it is at least as good as the incumbent.
pub fn update_gbest_phase(swarm: Swarm, workers: usize) -> Result<Swarm> {
    check_workers(workers)?;
    let layout = swarm.layout();
    let mut s = split(swarm, workers, layout);
    let locals = on_blocks(&mut s.parts, |p| p.local_best());
    let winner = reduce(locals.into_iter().flatten());
    if let Some(w) = winner {
        if w.fitness <= s.g_f {
            let owner = s
                .parts
                .iter()
                .find(|p| (p.first..p.first + p.len()).contains(&w.particle))
                .expect("winner belongs to a block");
            owner.pbest_row_into(w.particle, &mut s.gbest);
            s.g_f = w.fitness;
        }
    }
    Ok(merge(s.parts, s.gbest, s.g_f, layout))
}

pub(crate) fn reduce(candidates: impl Iterator<Item = Candidate>) -> Option<Candidate> {
    candidates.fold(None, |best: Option<Candidate>, c| match best {
        Some(b) if !c.beats(&b) => Some(b),
        _ => Some(c),
    })
}

/// One full synchronous iteration composed from the standalone phases.
pub fn iterate(
    swarm: Swarm,
    params: &SsoParams,
    f: &dyn Objective,
    rng: &RngStream,
    iteration: usize,
    workers: usize,
) -> Result<Swarm> {
    let swarm = search_phase(swarm, params, rng, iteration, workers)?;
    let swarm = evaluate_phase(swarm, f, workers).map_err(|e| match e {
        SsoError::NonFiniteParticle { particle, value } => {
            SsoError::NonFiniteFitness { iteration, particle, value }
        }
        other => other,
    })?;
    let swarm = update_pbests_phase(swarm, workers)?;
    update_gbest_phase(swarm, workers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{LayoutMode, ParticleMatrix};
    use crate::objective::sphere;
    use crate::swarm::initialize;

    fn small_swarm(nsol: usize, nvar: usize, seed: u64) -> (SsoParams, Swarm) {
        let params = SsoParams::default().with_sizes(nsol, nvar, 10);
        let swarm = initialize(&params, &sphere, &RngStream::new(seed)).unwrap();
        (params, swarm)
    }

    fn handmade(p_f: Vec<f64>, g_f: f64) -> Swarm {
        let n = p_f.len();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64, -(i as f64)]).collect();
        let m = ParticleMatrix::from_rows(&rows, LayoutMode::ParticleMajor).unwrap();
        Swarm::from_parts(m.clone(), m, vec![9.0, 9.0], p_f.clone(), p_f, g_f).unwrap()
    }

    #[test]
    fn keep_only_thresholds_leave_swarm_unchanged() {
        let (params, swarm) = small_swarm(12, 4, 3);
        let params = params.with_thresholds(1.0, 1.0, 1.0);
        let after = search_phase(swarm.clone(), &params, &RngStream::new(3), 0, 4).unwrap();
        assert_eq!(after, swarm);
    }

    #[test]
    fn search_is_worker_invariant_bitwise() {
        let (params, swarm) = small_swarm(37, 9, 8);
        let rng = RngStream::new(8);
        let one = search_phase(swarm.clone(), &params, &rng, 2, 1).unwrap();
        let eight = search_phase(swarm, &params, &rng, 2, 8).unwrap();
        let bits = |s: &Swarm| s.sol().iter_values().map(f64::to_bits).collect::<Vec<_>>();
        assert_eq!(bits(&one), bits(&eight));
    }

    #[test]
    fn search_reads_only_phase_entry_snapshot() {
        let (params, swarm) = small_swarm(25, 6, 12);
        let snapshot = swarm.clone();
        let rng = RngStream::new(12);
        let after = search_phase(swarm, &params, &rng, 0, 5).unwrap();
        // recompute every coordinate from the untouched copy
        for i in 0..25 {
            for j in 0..6 {
                let u = rng.branch(i, j, 0);
                let fresh = params.scale_to_bounds(rng.fresh(i, j, 0));
                let want = crate::step::step_update_variable(
                    snapshot.sol().get(i, j),
                    snapshot.pbests().get(i, j),
                    snapshot.gbest()[j],
                    u,
                    fresh,
                    &params,
                )
                .unwrap();
                assert_eq!(after.sol().get(i, j).to_bits(), want.to_bits());
            }
        }
        assert_eq!(after.pbests(), snapshot.pbests());
        assert_eq!(after.gbest(), snapshot.gbest());
    }

    #[test]
    fn evaluate_sphere_values() {
        let rows = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        let m = ParticleMatrix::from_rows(&rows, LayoutMode::Interleaved).unwrap();
        let swarm = Swarm::from_parts(m.clone(), m, vec![0.0, 0.0], vec![7.0, 7.0], vec![0.0, 25.0], 0.0).unwrap();
        let out = evaluate_phase(swarm, &sphere, 2).unwrap();
        assert_eq!(out.sol_f(), &[0.0, 25.0]);
    }

    #[test]
    fn parallel_evaluation_matches_row_by_row() {
        let (params, swarm) = small_swarm(20, 7, 21);
        let moved = search_phase(swarm, &params, &RngStream::new(21), 0, 1).unwrap();
        let out = evaluate_phase(moved.clone(), &sphere, 6).unwrap();
        let expected: Vec<f64> = moved.sol().to_rows().iter().map(|r| sphere(r)).collect();
        assert_eq!(out.sol_f(), expected.as_slice());
        assert_eq!(out.pbests(), moved.pbests());
        assert_eq!(out.p_f(), moved.p_f());
    }

    #[test]
    fn evaluate_reports_lowest_bad_particle() {
        let (_, swarm) = small_swarm(10, 2, 4);
        let bad = |x: &[f64]| if x[0] > 0.0 { f64::INFINITY } else { 1.0 };
        let first_bad = (0..10).find(|&i| swarm.sol().get(i, 0) > 0.0).unwrap();
        match evaluate_phase(swarm, &bad, 3) {
            Err(SsoError::NonFiniteParticle { particle, .. }) => assert_eq!(particle, first_bad),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equal_fitness_replaces_personal_best() {
        let mut swarm = handmade(vec![2.0, 2.0], 2.0);
        swarm.sol.write_row(0, &[5.0, 5.0]).unwrap();
        let out = update_pbests_phase(swarm, 2).unwrap();
        assert_eq!(out.pbests().row(0), vec![5.0, 5.0]);
    }

    #[test]
    fn worse_solutions_keep_personal_bests() {
        let mut swarm = handmade(vec![1.0, 2.0, 3.0], 1.0);
        swarm.sol_f = vec![1.5, 2.5, 3.5];
        swarm.sol.write_row(1, &[7.0, 7.0]).unwrap();
        let before = swarm.pbests().clone();
        let out = update_pbests_phase(swarm, 2).unwrap();
        assert_eq!(out.pbests(), &before);
        assert_eq!(out.p_f(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn gbest_unchanged_when_no_row_is_as_good() {
        let swarm = handmade(vec![5.0, 6.0], 4.0);
        let out = update_gbest_phase(swarm, 2).unwrap();
        assert_eq!(out.gbest(), &[9.0, 9.0]);
        assert_eq!(out.g_f(), 4.0);
    }

    #[test]
    fn gbest_tie_goes_to_lowest_index() {
        let swarm = handmade(vec![5.0, 3.0, 3.0], 4.0);
        for workers in 1..=3 {
            let out = update_gbest_phase(swarm.clone(), workers).unwrap();
            assert_eq!(out.g_f(), 3.0);
            assert_eq!(out.gbest(), &[1.0, -1.0]);
        }
    }

    #[test]
    fn gbest_single_particle_matches_sequential_rule() {
        for (p, g, adopt) in [(1.0, 2.0, true), (2.0, 2.0, true), (3.0, 2.0, false)] {
            let out = update_gbest_phase(handmade(vec![p], g), 1).unwrap();
            assert_eq!(out.g_f(), if adopt { p } else { g });
            assert_eq!(out.gbest() == [0.0, 0.0], adopt);
        }
    }

    #[test]
    fn zero_workers_rejected() {
        let (_, swarm) = small_swarm(3, 2, 1);
        assert_eq!(update_pbests_phase(swarm, 0).unwrap_err(), SsoError::NoWorkers);
    }
}
