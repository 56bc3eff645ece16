//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's preconditions.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Two vectors or grids that must agree in size do not.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// Histogram with fewer than two occupied bins; no threshold separates
    /// foreground from background.
    #[error("degenerate histogram: fewer than two occupied bins")]
    DegenerateHistogram,

    /// A fitness evaluation reported failure.
    #[error("fitness evaluation failed: {0}")]
    Fitness(String),

    /// Malformed or inconsistent model container.
    #[error("model file error: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
