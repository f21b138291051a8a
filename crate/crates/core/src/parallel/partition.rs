//! A contiguous range of particles owned by one worker.

use crate::error::SsoError;
use crate::layout::{LayoutMode, ParticleMatrix};
use crate::objective::Objective;
use crate::params::SsoParams;
use crate::rng::{DrawCount, RngStream};
use crate::swarm::{evaluate_row, search_row, BranchCounts, Swarm};

pub(crate) struct Partition {
    /// Global index of this block's first particle.
    pub first: usize,
    pub sol: ParticleMatrix,
    pub pbests: ParticleMatrix,
    pub sol_f: Vec<f64>,
    pub p_f: Vec<f64>,
    scratch: Vec<f64>,
}

/// Local winner of the global-best reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Candidate {
    pub fitness: f64,
    pub particle: usize,
}

impl Candidate {
    /// Lexicographic `(fitness, particle)` order; fitness values are finite.
    pub fn beats(&self, other: &Candidate) -> bool {
        (self.fitness, self.particle) < (other.fitness, other.particle)
    }
}

/// Balanced contiguous block sizes; never more blocks than particles.
pub(crate) fn block_sizes(nsol: usize, workers: usize) -> Vec<usize> {
    let blocks = workers.clamp(1, nsol.max(1));
    let (q, r) = (nsol / blocks, nsol % blocks);
    (0..blocks).map(|b| q + usize::from(b < r)).collect()
}

impl Partition {
    pub fn len(&self) -> usize {
        self.sol.rows()
    }

    pub fn search(
        &mut self,
        gbest: &[f64],
        iteration: usize,
        params: &SsoParams,
        rng: &RngStream,
        draws: &mut DrawCount,
        branches: &mut BranchCounts,
    ) {
        for r in 0..self.len() {
            search_row(
                &mut self.sol,
                &self.pbests,
                r,
                gbest,
                self.first + r,
                iteration,
                params,
                rng,
                draws,
                branches,
            );
        }
    }

    /// Evaluates every row; on a non-finite value returns the global particle
    /// index and the value, leaving `sol_f` partially written.
    pub fn evaluate(&mut self, f: &dyn Objective) -> Result<(), (usize, f64)> {
        for r in 0..self.len() {
            let value = evaluate_row(f, &self.sol, r, &mut self.scratch);
            if !value.is_finite() {
                return Err((self.first + r, value));
            }
            self.sol_f[r] = value;
        }
        Ok(())
    }

    pub fn update_pbests(&mut self) {
        for r in 0..self.len() {
            if self.sol_f[r] <= self.p_f[r] {
                self.pbests.copy_row_from(r, &self.sol, r);
                self.p_f[r] = self.sol_f[r];
            }
        }
    }

    /// Best personal best in this block, lowest index among ties.
    pub fn local_best(&self) -> Option<Candidate> {
        let mut best: Option<Candidate> = None;
        for (r, &fitness) in self.p_f.iter().enumerate() {
            let c = Candidate { fitness, particle: self.first + r };
            if best.is_none_or(|b| c.beats(&b)) {
                best = Some(c);
            }
        }
        best
    }

    pub fn pbest_row_into(&self, particle: usize, out: &mut [f64]) {
        self.pbests.copy_row_into(particle - self.first, out);
    }
}

pub(crate) struct Split {
    pub parts: Vec<Partition>,
    pub gbest: Vec<f64>,
    pub g_f: f64,
}

pub(crate) fn split(swarm: Swarm, workers: usize, layout: LayoutMode) -> Split {
    let swarm = swarm.with_layout(layout);
    let sizes = block_sizes(swarm.nsol(), workers);
    let sols = swarm.sol.split_rows(&sizes);
    let pbests = swarm.pbests.split_rows(&sizes);
    let nvar = swarm.nvar();
    let mut first = 0;
    let parts = sols
        .into_iter()
        .zip(pbests)
        .zip(&sizes)
        .map(|((sol, pbests), &n)| {
            let part = Partition {
                first,
                sol,
                pbests,
                sol_f: swarm.sol_f[first..first + n].to_vec(),
                p_f: swarm.p_f[first..first + n].to_vec(),
                scratch: vec![0.0; nvar],
            };
            first += n;
            part
        })
        .collect();
    Split { parts, gbest: swarm.gbest, g_f: swarm.g_f }
}

pub(crate) fn merge(parts: Vec<Partition>, gbest: Vec<f64>, g_f: f64, layout: LayoutMode) -> Swarm {
    let sols: Vec<_> = parts.iter().map(|p| p.sol.clone()).collect();
    let pbests: Vec<_> = parts.iter().map(|p| p.pbests.clone()).collect();
    let sol_f = parts.iter().flat_map(|p| p.sol_f.iter().copied()).collect();
    let p_f = parts.iter().flat_map(|p| p.p_f.iter().copied()).collect();
    Swarm {
        sol: ParticleMatrix::concat_rows(&sols, layout),
        pbests: ParticleMatrix::concat_rows(&pbests, layout),
        gbest,
        sol_f,
        p_f,
        g_f,
    }
}

pub(crate) fn non_finite(iteration: Option<usize>, (particle, value): (usize, f64)) -> SsoError {
    match iteration {
        Some(iteration) => SsoError::NonFiniteFitness { iteration, particle, value },
        None => SsoError::NonFiniteParticle { particle, value },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_population() {
        assert_eq!(block_sizes(10, 3), vec![4, 3, 3]);
        assert_eq!(block_sizes(2, 8), vec![1, 1]);
        assert_eq!(block_sizes(5, 1), vec![5]);
        assert_eq!(block_sizes(100, 8).iter().sum::<usize>(), 100);
    }

    #[test]
    fn candidate_order_is_lexicographic() {
        let a = Candidate { fitness: 3.0, particle: 1 };
        let b = Candidate { fitness: 3.0, particle: 2 };
        let c = Candidate { fitness: 2.0, particle: 9 };
        assert!(a.beats(&b));
        assert!(!b.beats(&a));
        assert!(c.beats(&a));
    }
}
