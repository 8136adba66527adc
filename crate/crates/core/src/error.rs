use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("generating set does not span the space")]
    NonSpanning,
    #[error("invalid norm specification: {0}")]
    InvalidSpec(String),
    #[error("operation requires a polyhedral norm")]
    NotPolyhedral,
    #[error("exact arithmetic is not available for this norm")]
    NotExact,
    #[error("dimension {dim} exceeds the guard {max} for {what}")]
    DimensionGuard { dim: usize, max: usize, what: &'static str },
    #[error("zero vector is not allowed here")]
    ZeroVector,
    #[error("norm is not absolute: witness {witness:?}")]
    NotAbsolute { witness: Vec<f64> },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no qualifying pair found; best candidate distances ({dist_primal}, {dist_dual})")]
    NotFound { dist_primal: f64, dist_dual: f64 },
    #[error("malformed space file: {0}")]
    SpaceFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
