//! Error types shared by all modules.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operands live in different tensor spaces.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operation is undefined on this input (e.g. the zero tensor).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// A group multiplication table failed validation.
    #[error("group table validation failed: {0}")]
    GroupValidation(String),

    /// A documented precondition does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The hypotheses of an inequality checker are not satisfied; this is
    /// not a counterexample, the check simply does not apply.
    #[error("inapplicable: {0}")]
    Inapplicable(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("format error: {0}")]
    Format(String),
}
