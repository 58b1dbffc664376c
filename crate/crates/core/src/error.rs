use thiserror::Error;

/// Errors raised by the matrix routines.
///
/// Every variant names the precondition that failed; the CLI maps them onto
/// exit code 3, except [`Error::NonFinite`] raised while parsing input (exit 2).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },

    #[error("entry count {len} does not match shape {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("SVD did not converge for a {rows}x{cols} matrix")]
    ConvergenceFailure { rows: usize, cols: usize },

    #[error("{what} must be square (got {rows}x{cols})")]
    NotSquare {
        what: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} must be nonzero")]
    ZeroMatrix(&'static str),

    #[error("product is nilpotent: rank((AB)^k) = 0, core part is empty")]
    NilpotentProduct,

    #[error("leading block is singular: smallest singular value {sigma_min:e} <= cutoff {cutoff:e}")]
    SingularLeadingBlock { sigma_min: f64, cutoff: f64 },

    #[error("decomposition check failed: {0}")]
    Decomposition(String),

    #[error("requested rank {rank} outside 0..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("requested index {index} outside 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("generator parameters inconsistent: {0}")]
    ParameterMismatch(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
