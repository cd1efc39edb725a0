use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A brute-force routine was asked for a size it deliberately does not support.
    #[error("{what} supports at most {max} spins, got {got}")]
    Capability {
        what: &'static str,
        max: usize,
        got: usize,
    },

    /// A non-finite intermediate value appeared during a quadrature.
    #[error("non-finite value encountered at {location}")]
    Numeric { location: String },

    /// The refined quadrature disagreed with the base quadrature by more than allowed.
    #[error("no convergence in {context}: |refined - base| = {abs_diff:e} exceeds {limit:e}")]
    Convergence {
        context: String,
        abs_diff: f64,
        limit: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
