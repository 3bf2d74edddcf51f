use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Newton iteration for quadrature nodes failed to converge. This signals a bug.
    #[error("Newton iteration for Gauss-Legendre node {index} of order {order} did not converge")]
    NoConvergence { order: usize, index: usize },

    /// Adaptive bisection hit the maximum recursion depth.
    #[error("adaptive quadrature exceeded depth {depth} on [{lo}, {hi}]")]
    DepthLimit { depth: usize, lo: f64, hi: f64 },

    /// The integrand returned a non-finite value.
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },

    /// The initial condition violates its invariants.
    #[error("invalid initial condition: {0}")]
    InitialCondition(String),

    /// A Wright-Fisher configuration violates its invariants.
    #[error("invalid Wright-Fisher configuration: {0}")]
    WfConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
