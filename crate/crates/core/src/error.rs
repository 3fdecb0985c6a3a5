use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    RaggedRow {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid tolerance {0}: must be finite and nonnegative")]
    InvalidTolerance(f64),
    #[error("invalid epsilon {0}: must be finite and nonnegative")]
    InvalidEpsilon(f64),
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("invalid expander parameters: {0}")]
    InvalidParams(String),
    #[error("exact enumeration limited to {limit} vertices, graph has {n}")]
    ExactLimitExceeded { n: usize, limit: usize },
    #[error("size window [{smin}, {smax}] is empty")]
    EmptyWindow { smin: usize, smax: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidFamily(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point set is not valid: {0}")]
    Invalid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
