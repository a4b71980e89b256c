use thiserror::Error;

use crate::algebra::Phase;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("solver requires phase {expected:?}, parameters are in phase {actual:?}")]
    WrongPhase { expected: Phase, actual: Phase },

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    /// `hbar^2 = gamma * theta` within the configured band; no reduction to
    /// canonical form exists.
    #[error("critical line: |hbar^2 - gamma*theta| = {delta_abs:e} is inside the critical band")]
    CriticalLine { delta_abs: f64 },

    #[error("ill-conditioned branch: {0}")]
    IllConditioned(String),

    #[error("singular map: condition estimate {condition:e} exceeds {limit:e}")]
    SingularMap { condition: f64, limit: f64 },

    #[error("invalid theta {0}: must be > 0")]
    InvalidTheta(f64),

    #[error("invalid sigma {0}: must be > 0")]
    InvalidSigma(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("sigma mismatch: representation has {rep}, map has {map}")]
    SigmaMismatch { rep: f64, map: f64 },

    #[error("empty interior: margin {margin} leaves nothing of factor dimension {dim}")]
    EmptyInterior { dim: usize, margin: usize },

    #[error("vacuum space has dimension {count}, expected 1")]
    DegenerateVacuum { count: usize },

    #[error("number basis broke down at vector {index} (residual norm {norm:e})")]
    BasisBreakdown { index: usize, norm: f64 },
}
