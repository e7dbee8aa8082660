//! Error taxonomy shared across the crate.
//!
//! Three failure classes cover everything the library can reject:
//! domain errors (an argument is outside the mathematical domain of the
//! operation), degenerate inputs (structurally valid data that carries no
//! information, e.g. a tally with zero positive trials), and numeric
//! failures (an iterative kernel did not converge within its budget).
//!
//! Unbounded results are *not* errors: estimators that can diverge report
//! `f64::INFINITY` through their normal return value.

use thiserror::Error;

/// Error type for all fallible operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input is structurally valid but carries no usable information.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative numeric kernel failed to converge within its budget.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
