//! Error type shared by every module of the crate.

/// Failure modes of the laboratory operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A point, index, or grid axis had the wrong number of coordinates.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A constructor argument was outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested operation is not defined for this body or measure.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The quantity has no closed form; an estimator must be used instead.
    #[error("no closed form: {0}")]
    NoClosedForm(String),

    /// The ordered Gram factorization hit a non-positive pivot.
    #[error("Gram matrix numerically rank-deficient at pivot {pivot}")]
    RankDeficient { pivot: usize },

    /// Two fields were compared over different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A rate fit was requested on data that cannot support one.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// An iterative numeric routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
