use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(usize),
    #[error("radius must be at least 1, got {0}")]
    InvalidRadius(i64),
    #[error("point has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point {0} lies outside the ball")]
    OutsideBall(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid modification: {0}")]
    InvalidModification(String),
    #[error("solver inconsistency: {0}")]
    Inconsistent(String),
    #[error("solver failed to converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
