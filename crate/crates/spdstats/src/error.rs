//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by matrix kernels, metrics, estimators and I/O.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    /// Carries the offending (most negative) eigenvalue.
    #[error("matrix is not positive semi-definite: eigenvalue {0}")]
    NotPositiveSemidefinite(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("overflow in matrix exponential: eigenvalue {0}")]
    Overflow(f64),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("matrix is not diagonalizable")]
    NotDiagonalizable,

    #[error("empty sample")]
    EmptySample,

    #[error("no convergence after {iterations} iterations (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid principal component index {index} (model has {available})")]
    InvalidComponent { index: usize, available: usize },

    #[error("anisotropy undefined: {0}")]
    UndefinedAnisotropy(String),

    #[error("degenerate gradient scheme: {0}")]
    DegenerateGradientScheme(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A Monte Carlo study aborts when an estimator fails on more
    /// replications than its failure budget allows; silently dropping them
    /// would bias the summaries.
    #[error("estimator {estimator} failed on {failures}/{replications} replications")]
    ExcessiveFailures {
        estimator: String,
        failures: usize,
        replications: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
