//! The four-way step update applied to every coordinate.

use crate::error::{Result, SsoError};
use crate::params::SsoParams;

/// Which candidate a coordinate update selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `u` in `[0, cw)`: keep the current value.
    Current,
    /// `u` in `[cw, cp)`: copy the personal best.
    Personal,
    /// `u` in `[cp, cg)`: copy the global best.
    Global,
    /// `u` in `[cg, 1)`: draw a fresh value from the bounds.
    Fresh,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::Current, Branch::Personal, Branch::Global, Branch::Fresh];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Picks the branch for deviate `u`. `u` must already be known to lie in `[0, 1)`.
#[inline]
pub fn select_branch(u: f64, params: &SsoParams) -> Branch {
    if u < params.cw {
        Branch::Current
    } else if u < params.cp {
        Branch::Personal
    } else if u < params.cg {
        Branch::Global
    } else {
        Branch::Fresh
    }
}

/// Updates one coordinate from its current value `x`, personal best `p`,
/// global best `g`, branch deviate `u` and fresh candidate `fresh`.
pub fn step_update_variable(x: f64, p: f64, g: f64, u: f64, fresh: f64, params: &SsoParams) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(SsoError::DeviateOutOfRange(u));
    }
    Ok(match select_branch(u, params) {
        Branch::Current => x,
        Branch::Personal => p,
        Branch::Global => g,
        Branch::Fresh => fresh,
    })
}
