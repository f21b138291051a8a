//! The nine-function benchmark suite (f1 .. f9) with feasible bounds.
//!
//! Several formulas are implemented in their standard textbook form rather
//! than as typeset in the source table; [`DEVIATIONS`] lists every such
//! difference in machine-readable form.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::objective::Objective;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchmarkError {
    #[error("{id}: expected {expected} coordinates, got {found}")]
    DimensionMismatch { id: FunctionId, expected: usize, found: usize },
    #[error("f8 (Powell) needs a dimension divisible by 4, got {0}")]
    PowellDimension(usize),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("unknown function id `{0}` (expected f1..f9)")]
    UnknownId(String),
}

/// Stable identifiers f1..f9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionId {
    #[serde(rename = "f1")]
    F1,
    #[serde(rename = "f2")]
    F2,
    #[serde(rename = "f3")]
    F3,
    #[serde(rename = "f4")]
    F4,
    #[serde(rename = "f5")]
    F5,
    #[serde(rename = "f6")]
    F6,
    #[serde(rename = "f7")]
    F7,
    #[serde(rename = "f8")]
    F8,
    #[serde(rename = "f9")]
    F9,
}

impl FunctionId {
    pub const ALL: [FunctionId; 9] = [
        FunctionId::F1,
        FunctionId::F2,
        FunctionId::F3,
        FunctionId::F4,
        FunctionId::F5,
        FunctionId::F6,
        FunctionId::F7,
        FunctionId::F8,
        FunctionId::F9,
    ];

    pub fn token(self) -> &'static str {
        match self {
            FunctionId::F1 => "f1",
            FunctionId::F2 => "f2",
            FunctionId::F3 => "f3",
            FunctionId::F4 => "f4",
            FunctionId::F5 => "f5",
            FunctionId::F6 => "f6",
            FunctionId::F7 => "f7",
            FunctionId::F8 => "f8",
            FunctionId::F9 => "f9",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::F1 => "Sphere",
            FunctionId::F2 => "Hyper-ellipsoid",
            FunctionId::F3 => "Schwefel 1.2",
            FunctionId::F4 => "Rosenbrock",
            FunctionId::F5 => "Rastrigin",
            FunctionId::F6 => "Ackley",
            FunctionId::F7 => "Griewank",
            FunctionId::F8 => "Powell",
            FunctionId::F9 => "Schwefel",
        }
    }

    /// Feasible box `[lo, hi]` applied to every coordinate.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            FunctionId::F1 | FunctionId::F2 | FunctionId::F5 | FunctionId::F9 => (-5.12, 5.12),
            FunctionId::F3 => (-65.536, 65.536),
            FunctionId::F4 => (-2.048, 2.048),
            FunctionId::F6 => (-32.768, 32.768),
            FunctionId::F7 => (-600.0, 600.0),
            FunctionId::F8 => (-4.0, 5.0),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FunctionId {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| BenchmarkError::UnknownId(s.to_string()))
    }
}

/// One documented difference between the implemented and the typeset formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub id: FunctionId,
    pub printed: &'static str,
    pub implemented: &'static str,
    pub reason: &'static str,
}

pub const DEVIATIONS: &[Deviation] = &[
    Deviation {
        id: FunctionId::F3,
        printed: "sum_i (sum_{j<=i} x_j^2)",
        implemented: "sum_{i=1..P} (sum_{j=1..i} x_j)^2",
        reason: "squared partial sums; the printed form is separable but f3 is classed inseparable",
    },
    Deviation {
        id: FunctionId::F5,
        printed: "10P + sum_{i=1..P-1} [x_i^2 - 10(2 pi x_i)]",
        implemented: "10P + sum_{i=1..P} [x_i^2 - 10 cos(2 pi x_i)]",
        reason: "restores the cosine and the upper limit P so that f5(0) = 0",
    },
    Deviation {
        id: FunctionId::F6,
        printed: "-a exp(-b sqrt(mean x_i)) - exp(mean cos(c x_i))",
        implemented: "-20 exp(-0.2 sqrt(mean x_i^2)) - exp(mean cos(2 pi x_i)) + 20 + e",
        reason: "standard Ackley: inner square, additive constants and a=20, b=0.2, c=2 pi",
    },
    Deviation {
        id: FunctionId::F8,
        printed: "sum_{i=1..P/4} [(x+10y)^2] + [5(z-w)^2 + (y-2z)^4] [10(x-w)^4]",
        implemented: "sum_{k=1..P/4} (x+10y)^2 + 5(z-w)^2 + (y-2z)^4 + 10(x-w)^4",
        reason: "standard Powell singular function; bracket grouping is typesetting noise",
    },
    Deviation {
        id: FunctionId::F8,
        printed: "P/4 groups",
        implemented: "floor(P/4) groups when P % 4 != 0 (truncated mode only)",
        reason: "evaluating at P = 50 needs a rule for the two leftover coordinates; they are ignored",
    },
];

/// A benchmark instantiated at a fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Benchmark {
    id: FunctionId,
    dimension: usize,
    /// Powell only: trailing `dimension % 4` coordinates are ignored.
    truncated: bool,
}

/// Function value plus whether the point lay inside the feasible box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub in_bounds: bool,
}

impl Benchmark {
    /// Strict constructor: f8 requires a dimension divisible by 4.
    pub fn new(id: FunctionId, dimension: usize) -> Result<Self, BenchmarkError> {
        if dimension == 0 {
            return Err(BenchmarkError::ZeroDimension);
        }
        if id == FunctionId::F8 && !dimension.is_multiple_of(4) {
            return Err(BenchmarkError::PowellDimension(dimension));
        }
        Ok(Self { id, dimension, truncated: false })
    }

    /// Like [`new`](Self::new), but f8 at a dimension not divisible by 4
    /// evaluates only the first `4 * floor(P / 4)` coordinates.
    pub fn new_truncating(id: FunctionId, dimension: usize) -> Result<Self, BenchmarkError> {
        match Self::new(id, dimension) {
            Err(BenchmarkError::PowellDimension(p)) if p >= 4 => {
                warn!("f8 at dimension {p}: evaluating {} coordinates, ignoring {}", p - p % 4, p % 4);
                Ok(Self { id, dimension, truncated: true })
            }
            other => other,
        }
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.id.bounds()
    }

    /// True when this instance ignores trailing coordinates (f8 only).
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Known minimizer of the implemented form inside the box.
    pub fn reference_point(&self) -> Vec<f64> {
        match self.id {
            FunctionId::F4 => vec![1.0; self.dimension],
            // x sin(sqrt|x|) is increasing on [0, 5.12], so the minimizer sits on the upper bound
            FunctionId::F9 => vec![self.bounds().1; self.dimension],
            _ => vec![0.0; self.dimension],
        }
    }

    pub fn reference_value(&self) -> f64 {
        match self.id {
            FunctionId::F9 => {
                let hi = self.bounds().1;
                418.9829 * self.dimension as f64 - self.dimension as f64 * hi * hi.abs().sqrt().sin()
            }
            _ => 0.0,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Evaluation, BenchmarkError> {
        if x.len() != self.dimension {
            return Err(BenchmarkError::DimensionMismatch {
                id: self.id,
                expected: self.dimension,
                found: x.len(),
            });
        }
        let (lo, hi) = self.bounds();
        Ok(Evaluation { value: self.value(x), in_bounds: x.iter().all(|&v| lo <= v && v <= hi) })
    }

    /// Unchecked value; `x.len()` must equal the dimension.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self.id {
            FunctionId::F1 => x.iter().map(|v| v * v).sum(),
            FunctionId::F2 => x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum(),
            FunctionId::F3 => {
                let mut partial = 0.0;
                let mut total = 0.0;
                for v in x {
                    partial += v;
                    total += partial * partial;
                }
                total
            }
            FunctionId::F4 => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            FunctionId::F5 => {
                10.0 * x.len() as f64
                    + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
            }
            FunctionId::F6 => {
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            FunctionId::F7 => {
                let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            FunctionId::F8 => x
                .chunks_exact(4)
                .map(|g| {
                    (g[0] + 10.0 * g[1]).powi(2)
                        + 5.0 * (g[2] - g[3]).powi(2)
                        + (g[1] - 2.0 * g[2]).powi(4)
                        + 10.0 * (g[0] - g[3]).powi(4)
                })
                .sum(),
            FunctionId::F9 => {
                418.9829 * x.len() as f64 - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
            }
        }
    }
}

impl Objective for Benchmark {
    fn evaluate(&self, x: &[f64]) -> f64 {
        self.value(x)
    }
}

/// How [`list_suite`] treats f8 when the dimension is not divisible by 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteMode {
    /// Refuse the dimension.
    Strict,
    /// Leave f8 out and report a warning.
    Lenient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub functions: Vec<Benchmark>,
    pub warnings: Vec<String>,
}

/// All nine functions at `dimension`.
pub fn list_suite(dimension: usize, mode: SuiteMode) -> Result<Suite, BenchmarkError> {
    let mut functions = Vec::with_capacity(9);
    let mut warnings = Vec::new();
    for id in FunctionId::ALL {
        match Benchmark::new(id, dimension) {
            Ok(b) => functions.push(b),
            Err(BenchmarkError::PowellDimension(p)) if mode == SuiteMode::Lenient => {
                let msg = format!("f8 omitted: dimension {p} is not divisible by 4");
                warn!("{msg}");
                warnings.push(msg);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Suite { functions, warnings })
}
