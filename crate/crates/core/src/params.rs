//! Algorithm constants shared by both schedules.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SsoError};

/// Constants of one SSO run.
///
/// `cw`, `cp` and `cg` are cumulative thresholds splitting `[0, 1)` into the
/// four update branches: keep the current value, take the personal best,
/// take the global best, or draw a fresh value from `[var_min, var_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsoParams {
    pub cw: f64,
    pub cp: f64,
    pub cg: f64,
    pub var_min: f64,
    pub var_max: f64,
    pub nsol: usize,
    pub nvar: usize,
    pub niter: usize,
}

impl Default for SsoParams {
    /// Population 100, dimension 50, 1000 iterations, thresholds
    /// (0.3, 0.6, 0.8) on `[-5.12, 5.12]`.
    fn default() -> Self {
        Self {
            cw: 0.3,
            cp: 0.6,
            cg: 0.8,
            var_min: -5.12,
            var_max: 5.12,
            nsol: 100,
            nvar: 50,
            niter: 1000,
        }
    }
}

impl SsoParams {
    pub fn with_thresholds(mut self, cw: f64, cp: f64, cg: f64) -> Self {
        self.cw = cw;
        self.cp = cp;
        self.cg = cg;
        self
    }

    pub fn with_bounds(mut self, var_min: f64, var_max: f64) -> Self {
        self.var_min = var_min;
        self.var_max = var_max;
        self
    }

    pub fn with_sizes(mut self, nsol: usize, nvar: usize, niter: usize) -> Self {
        self.nsol = nsol;
        self.nvar = nvar;
        self.niter = niter;
        self
    }

    /// Checks threshold ordering, bounds and sizes.
    pub fn validate(&self) -> Result<()> {
        let Self { cw, cp, cg, .. } = *self;
        if ![cw, cp, cg].iter().all(|c| c.is_finite()) {
            return Err(SsoError::InvalidParams("thresholds must be finite".into()));
        }
        if !(0.0 <= cw && cw <= cp && cp <= cg && cg <= 1.0) {
            return Err(SsoError::InvalidParams(format!(
                "thresholds must satisfy 0 <= cw <= cp <= cg <= 1, got ({cw}, {cp}, {cg})"
            )));
        }
        if !self.var_min.is_finite() || !self.var_max.is_finite() {
            return Err(SsoError::InvalidParams("bounds must be finite".into()));
        }
        if self.var_min >= self.var_max {
            return Err(SsoError::InvalidParams(format!(
                "var_min ({}) must be strictly below var_max ({})",
                self.var_min, self.var_max
            )));
        }
        for (name, value) in [("nsol", self.nsol), ("nvar", self.nvar), ("niter", self.niter)] {
            if value == 0 {
                return Err(SsoError::InvalidParams(format!("{name} must be at least 1")));
            }
            // RNG counters address particles, variables and iterations with 32 bits.
            if value > u32::MAX as usize {
                return Err(SsoError::InvalidParams(format!("{name} exceeds 2^32 - 1")));
            }
        }
        Ok(())
    }

    /// Maps a uniform deviate in `[0, 1)` onto `[var_min, var_max)`.
    pub fn scale_to_bounds(&self, u: f64) -> f64 {
        let v = self.var_min + u * (self.var_max - self.var_min);
        if v >= self.var_max {
            self.var_max.next_down()
        } else {
            v.max(self.var_min)
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.var_min <= x && x <= self.var_max
    }
}
