use thiserror::Error;

/// Failures raised by the optimizer (parameters, search, evaluation, layout).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SsoError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("uniform deviate {0} is outside [0, 1)")]
    DeviateOutOfRange(f64),

    #[error("objective returned non-finite value {value} for particle {particle} during initialization")]
    NonFiniteAtInit { particle: usize, value: f64 },

    #[error("objective returned non-finite value {value} for particle {particle} at iteration {iteration}")]
    NonFiniteFitness {
        iteration: usize,
        particle: usize,
        value: f64,
    },

    #[error("objective returned non-finite value {value} for particle {particle}")]
    NonFiniteParticle { particle: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("worker count must be at least 1")]
    NoWorkers,
}

pub type Result<T, E = SsoError> = std::result::Result<T, E>;
