//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("point must have at least one finite coordinate, got {0:?}")]
    InvalidPoint(Vec<f64>),

    #[error("alpha must be finite and positive, got {0}")]
    InvalidAlpha(f64),

    #[error("zero-length segment")]
    ZeroLengthSegment,

    #[error("points {0} and {1} coincide; instances must have distinct points")]
    DuplicatePoint(usize, usize),

    #[error("point set must contain at least one point")]
    EmptyPointSet,

    #[error("edge {0} is not an edge of the tree")]
    NotATreeEdge(usize),

    #[error("{what} requires {min} <= n <= {max}, got {n}")]
    SizeOutOfRange {
        what: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("{what} requires alpha >= {min}, got {alpha}")]
    AlphaOutOfScope {
        what: &'static str,
        alpha: f64,
        min: f64,
    },

    #[error("operation requires {expected}-dimensional points, got {got}")]
    UnsupportedDimension { expected: usize, got: usize },

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid instance parameters: {0}")]
    InvalidParameter(String),

    #[error("malformed instance file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
