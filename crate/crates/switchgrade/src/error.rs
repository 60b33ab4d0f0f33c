//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Variants distinguish the
//! caller's mistakes (bad dimensions, non-finite input, malformed files)
//! from numerical failures (overflow, lost accuracy, internal consistency
//! checks) so that the CLI can map them to meaningful exit codes and tests
//! can assert on the precise failure mode.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition (non-finite entries,
    /// negative durations, weights off the simplex, …).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Operands have incompatible or unsupported dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A computation left the representable range (overflow to ±∞/NaN, or
    /// an integer count that does not fit the return type).
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iterative scheme stopped before reaching its target accuracy.
    #[error("accuracy loss: {0}")]
    AccuracyLoss(String),

    /// The requested method does not apply to the given system (e.g. the
    /// planar angular method on a system whose rotation rate changes sign).
    #[error("method not applicable: {0}")]
    MethodInapplicable(String),

    /// A decision procedure could neither confirm nor refute the property.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// A certificate that presumes a marginally stable normalization
    /// (top exponent zero) detected a non-zero exponent instead.
    #[error("lambda inconsistency: {0}")]
    LambdaInconsistency(String),

    /// A root-finding bracket or other configuration requirement failed.
    #[error("configuration error: {0}")]
    Config(String),

    /// A schedule or report file failed to parse.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand used by constructors that validate input.
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Shorthand for dimension complaints.
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
