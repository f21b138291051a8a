//! Swarm state and the per-particle kernels shared by both schedules.

use crate::error::{Result, SsoError};
use crate::layout::{LayoutMode, ParticleMatrix};
use crate::objective::Objective;
use crate::params::SsoParams;
use crate::rng::{DrawCount, RngStream};
use crate::step::{select_branch, Branch};

/// Current positions, personal bests, global best and their cached fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub(crate) sol: ParticleMatrix,
    pub(crate) pbests: ParticleMatrix,
    pub(crate) gbest: Vec<f64>,
    pub(crate) sol_f: Vec<f64>,
    pub(crate) p_f: Vec<f64>,
    pub(crate) g_f: f64,
}

impl Swarm {
    /// Assembles a swarm from explicit parts. Only shapes are checked; the
    /// caller is responsible for the cached fitness values being current.
    pub fn from_parts(
        sol: ParticleMatrix,
        pbests: ParticleMatrix,
        gbest: Vec<f64>,
        sol_f: Vec<f64>,
        p_f: Vec<f64>,
        g_f: f64,
    ) -> Result<Self> {
        let (n, d) = (sol.rows(), sol.cols());
        if pbests.rows() != n {
            return Err(SsoError::DimensionMismatch { expected: n, found: pbests.rows() });
        }
        for len in [pbests.cols(), gbest.len()] {
            if len != d {
                return Err(SsoError::DimensionMismatch { expected: d, found: len });
            }
        }
        for len in [sol_f.len(), p_f.len()] {
            if len != n {
                return Err(SsoError::DimensionMismatch { expected: n, found: len });
            }
        }
        let pbests = if pbests.layout() == sol.layout() { pbests } else { pbests.to_layout(sol.layout()) };
        Ok(Self { sol, pbests, gbest, sol_f, p_f, g_f })
    }

    pub fn nsol(&self) -> usize {
        self.sol.rows()
    }

    pub fn nvar(&self) -> usize {
        self.sol.cols()
    }

    pub fn layout(&self) -> LayoutMode {
        self.sol.layout()
    }

    pub fn sol(&self) -> &ParticleMatrix {
        &self.sol
    }

    pub fn pbests(&self) -> &ParticleMatrix {
        &self.pbests
    }

    pub fn gbest(&self) -> &[f64] {
        &self.gbest
    }

    pub fn sol_f(&self) -> &[f64] {
        &self.sol_f
    }

    pub fn p_f(&self) -> &[f64] {
        &self.p_f
    }

    pub fn g_f(&self) -> f64 {
        self.g_f
    }

    /// Same swarm with its matrices stored in `layout`.
    pub fn with_layout(mut self, layout: LayoutMode) -> Self {
        if layout != self.layout() {
            self.sol = self.sol.to_layout(layout);
            self.pbests = self.pbests.to_layout(layout);
        }
        self
    }

    /// Lists every broken swarm invariant; empty when the state is consistent.
    ///
    /// Checks cached personal-best fitness against `f`, personal-best
    /// dominance, the global best being the best personal best, and bounds.
    pub fn invariant_violations(&self, params: &SsoParams, f: &dyn Objective) -> Vec<String> {
        let mut out = Vec::new();
        let mut row = vec![0.0; self.nvar()];
        let mut best = f64::INFINITY;
        for i in 0..self.nsol() {
            self.pbests.copy_row_into(i, &mut row);
            let value = f.evaluate(&row);
            if value.to_bits() != self.p_f[i].to_bits() {
                out.push(format!("p_f[{i}] = {} but objective gives {value}", self.p_f[i]));
            }
            if self.p_f[i] > self.sol_f[i] {
                out.push(format!("p_f[{i}] = {} exceeds sol_f[{i}] = {}", self.p_f[i], self.sol_f[i]));
            }
            best = best.min(self.p_f[i]);
        }
        if self.g_f != best {
            out.push(format!("g_f = {} but best personal fitness is {best}", self.g_f));
        }
        let matches_some_row = (0..self.nsol()).any(|i| {
            self.p_f[i] == self.g_f && (0..self.nvar()).all(|j| self.pbests.get(i, j) == self.gbest[j])
        });
        if !matches_some_row {
            out.push("gbest is not a personal-best row achieving g_f".to_string());
        }
        let outside = self
            .sol
            .iter_values()
            .chain(self.pbests.iter_values())
            .chain(self.gbest.iter().copied())
            .filter(|&x| !params.contains(x))
            .count();
        if outside > 0 {
            out.push(format!("{outside} coordinates outside [{}, {}]", params.var_min, params.var_max));
        }
        out
    }
}

/// Draws the initial population, evaluates it and selects the global best
/// (lowest index among equal fitness).
pub fn initialize(params: &SsoParams, f: &dyn Objective, rng: &RngStream) -> Result<Swarm> {
    params.validate()?;
    let (nsol, nvar) = (params.nsol, params.nvar);
    let mut sol = ParticleMatrix::zeros(nsol, nvar, LayoutMode::ParticleMajor);
    for i in 0..nsol {
        for j in 0..nvar {
            sol.set(i, j, params.scale_to_bounds(rng.init(i, j)));
        }
    }
    let mut sol_f = Vec::with_capacity(nsol);
    for i in 0..nsol {
        let value = f.evaluate(sol.row_slice(i).expect("particle-major"));
        if !value.is_finite() {
            return Err(SsoError::NonFiniteAtInit { particle: i, value });
        }
        sol_f.push(value);
    }
    let mut best = 0;
    for (i, &v) in sol_f.iter().enumerate() {
        if v < sol_f[best] {
            best = i;
        }
    }
    Ok(Swarm {
        gbest: sol.row(best),
        g_f: sol_f[best],
        pbests: sol.clone(),
        p_f: sol_f.clone(),
        sol,
        sol_f,
    })
}

/// Deviates consumed by [`initialize`].
pub fn init_draws(params: &SsoParams) -> DrawCount {
    DrawCount { init: (params.nsol * params.nvar) as u64, ..DrawCount::default() }
}

/// Per-branch tally of coordinate updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BranchCounts(pub [u64; 4]);

impl BranchCounts {
    pub fn get(&self, branch: Branch) -> u64 {
        self.0[branch.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl std::ops::AddAssign for BranchCounts {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

/// Rewrites row `row` of `sol` with the step update. `particle` is the
/// global particle index used to address the random streams.
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn search_row(
    sol: &mut ParticleMatrix,
    pbests: &ParticleMatrix,
    row: usize,
    gbest: &[f64],
    particle: usize,
    iteration: usize,
    params: &SsoParams,
    rng: &RngStream,
    draws: &mut DrawCount,
    branches: &mut BranchCounts,
) {
    for (j, &g) in gbest.iter().enumerate() {
        let u = rng.branch(particle, j, iteration);
        draws.branch += 1;
        let branch = select_branch(u, params);
        branches.0[branch.index()] += 1;
        let value = match branch {
            Branch::Current => continue,
            Branch::Personal => pbests.get(row, j),
            Branch::Global => g,
            Branch::Fresh => {
                draws.fresh += 1;
                params.scale_to_bounds(rng.fresh(particle, j, iteration))
            }
        };
        sol.set(row, j, value);
    }
}

/// Evaluates row `row` of `m`, using `scratch` when the row is not contiguous.
#[inline]
pub(crate) fn evaluate_row(f: &dyn Objective, m: &ParticleMatrix, row: usize, scratch: &mut [f64]) -> f64 {
    match m.row_slice(row) {
        Some(slice) => f.evaluate(slice),
        None => {
            m.copy_row_into(row, scratch);
            f.evaluate(scratch)
        }
    }
}
