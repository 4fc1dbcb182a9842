use thiserror::Error;

/// Errors produced by the library. Indices in messages are 0-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BiquadError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry at flat position {0}")]
    NonFiniteEntry(usize),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("tensor has a negative entry at ({0}, {1}, {2}, {3})")]
    NotNonnegative(usize, usize, usize, usize),

    #[error("vector has a negative component at position {0}")]
    NegativeComponent(usize),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("degenerate point: {side} component {index} and its gradient entry are both zero")]
    DegeneratePoint { side: Side, index: usize },

    #[error("invalid start: {0}")]
    InvalidStart(String),

    #[error("matrix is not symmetric at ({0}, {1})")]
    NonSymmetricFactor(usize, usize),

    #[error("duplicate coordinate entry ({0}, {1}, {2}, {3})")]
    DuplicateEntry(usize, usize, usize, usize),

    #[error("empty eigenpair list")]
    EmptyList,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, BiquadError>;

/// Which mode of the tensor a vector or index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Y,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::X => f.write_str("x"),
            Side::Y => f.write_str("y"),
        }
    }
}

impl From<std::io::Error> for BiquadError {
    fn from(e: std::io::Error) -> Self {
        BiquadError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for BiquadError {
    fn from(e: serde_json::Error) -> Self {
        BiquadError::Parse(e.to_string())
    }
}
