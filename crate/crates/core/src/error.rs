//! Error type shared by every module.

use thiserror::Error;

/// Failures raised by library operations.
///
/// Modeled outcomes such as a QEC `flag` or an aborted protocol run are data,
/// not errors; this type only covers violated preconditions and bad input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymError {
    /// Construction parameters that cannot describe a valid object.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The state has zero J^z variance, so the SLD direction is undefined.
    #[error("state has zero variance; SLD direction undefined")]
    ZeroVariance,
    /// A measurement outcome with zero probability was requested.
    #[error("outcome has zero probability: {0}")]
    ZeroProbability(String),
    /// The linear program has an empty feasible region.
    #[error("linear program is infeasible")]
    Infeasible,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SymError>;

pub(crate) fn invalid(msg: impl Into<String>) -> SymError {
    SymError::InvalidParams(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> SymError {
    SymError::Precondition(msg.into())
}
