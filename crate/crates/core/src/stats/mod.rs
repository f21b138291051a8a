//! Hypothesis tests for comparing optimizer runs.
//!
//! Rank tests (Kruskal–Wallis, Friedman) use mid-ranks with the usual tie
//! correction. Variance homogeneity offers Bartlett and mean-centred
//! Levene. The two-sample t-test uses the pooled variance. Normality is
//! Anderson–Darling with estimated mean and variance.

mod dist;
mod normality;
mod parametric;
mod rank;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use dist::{chi_square_sf, f_sf, normal_cdf, t_cdf, t_sf_two_sided};
pub use normality::normality;
pub use parametric::{t_test_independent, variance_homogeneity, HomogeneityMethod};
pub use rank::{friedman, kruskal_wallis, mid_ranks};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least {needed} {what}, got {got}")]
    TooFew { what: &'static str, needed: usize, got: usize },
    #[error("non-finite observation {0}")]
    NonFinite(f64),
    #[error("rows have unequal length: expected {expected}, found {found}")]
    Ragged { expected: usize, found: usize },
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    KruskalWallis,
    Friedman,
    Bartlett,
    LeveneMean,
    PooledTTest,
    AndersonDarling,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::KruskalWallis => "kruskal-wallis",
            Method::Friedman => "friedman",
            Method::Bartlett => "bartlett",
            Method::LeveneMean => "levene-mean",
            Method::PooledTTest => "pooled-t",
            Method::AndersonDarling => "anderson-darling",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Degrees of freedom of the reference distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Df {
    None,
    One(f64),
    Two(f64, f64),
}

impl fmt::Display for Df {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Df::None => f.write_str("-"),
            Df::One(a) => write!(f, "{a}"),
            Df::Two(a, b) => write!(f, "{a},{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub df: Df,
    pub method: Method,
    /// Set when the data carried no information (all tied, zero variance)
    /// and the result was defined by convention.
    pub degenerate: bool,
    pub notes: Vec<String>,
}

impl TestResult {
    fn new(method: Method, statistic: f64, p_value: f64, df: Df) -> Self {
        Self {
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            df,
            method,
            degenerate: false,
            notes: Vec::new(),
        }
    }

    fn degenerate(method: Method, df: Df, note: impl Into<String>) -> Self {
        Self {
            statistic: 0.0,
            p_value: 1.0,
            df,
            method,
            degenerate: true,
            notes: vec![note.into()],
        }
    }
}

fn check_finite(values: &[f64]) -> Result<(), StatsError> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(&v) => Err(StatsError::NonFinite(v)),
        None => Ok(()),
    }
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance (divisor n - 1).
pub(crate) fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}
