use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("quadrature did not converge: achieved error {achieved:e}, target {target:e}")]
    Quadrature { achieved: f64, target: f64 },

    #[error("lambda = {lambda} is within {distance:e} of the pole at -1 (floor {floor:e})")]
    PoleProximity {
        lambda: String,
        distance: f64,
        floor: f64,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
