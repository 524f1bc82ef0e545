//! Error type shared by all library operations.

use thiserror::Error;

/// Errors produced by graph construction, structural analysis and the
/// numerical operators.
#[derive(Debug, Error)]
pub enum Error {
    /// An edge-list line that could not be parsed. Line numbers are 1-based.
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An input value that violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative method hit its iteration cap before reaching the
    /// requested tolerance. Carries the best iterate seen so far.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    /// An internal invariant failed; this signals a bug, not bad input.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
