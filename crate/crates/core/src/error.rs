//! Error types shared across the crate.

use thiserror::Error;

/// Errors surfaced by the numeric kernel and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the operation's domain (bad parameter, outcome not in
    /// the family support, malformed simplex, ...).
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// An iterative routine exhausted its budget. `partial` carries the
    /// best value reached so callers can report or inspect it.
    #[error("{op} did not converge within {iterations} iterations (partial value {partial})")]
    Convergence {
        op: &'static str,
        iterations: usize,
        partial: f64,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn convergence(op: &'static str, iterations: usize, partial: f64) -> Self {
        Error::Convergence {
            op,
            iterations,
            partial,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
