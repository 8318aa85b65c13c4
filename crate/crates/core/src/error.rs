use thiserror::Error;

/// Errors raised by game construction, behavior manipulation and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Party counts or tuple lengths disagree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds a fixed enumeration or solver cap.
    #[error("capacity exceeded: {what} (n = {n}, max {max})")]
    Capacity { what: &'static str, n: usize, max: usize },

    /// A marginal was requested from a behavior that signals.
    #[error("marginal is ill-defined: behavior is signaling")]
    IllDefinedMarginal,

    /// A quantum model violates its invariants.
    #[error("invalid quantum model: {0}")]
    InvalidModel(String),

    /// Malformed textual input (rationals, JSON documents, game names).
    #[error("parse error: {0}")]
    Parse(String),

    /// The solver produced a witness that failed independent re-validation.
    #[error("solver invariant violated: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
