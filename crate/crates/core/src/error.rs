//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input lies outside the domain of a partial function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A literal could not be parsed.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A finite tree is too shallow to answer the query.
    #[error("depth insufficient: {0}")]
    DepthInsufficient(String),

    /// A search ran past its configured budget.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    /// A finite prefix was read past its end.
    #[error("prefix exhausted: position {0} is beyond the available prefix")]
    PrefixExhausted(usize),

    /// A named precondition of a construction does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
