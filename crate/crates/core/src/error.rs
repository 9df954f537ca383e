use thiserror::Error;

/// Errors produced by kernel distance computations and the file parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("kernel is not positive semidefinite on this input (min eigenvalue {0:e})")]
    Indefinite(f64),

    #[error("measures indistinguishable under K (D_K = {0:e})")]
    Indistinguishable(f64),

    #[error("no unbiased feature map implemented for the {0} kernel")]
    NoFeatureMap(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
