use thiserror::Error;

/// Errors reported by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Gauss-Jacobi node {index} did not converge (residual {residual:e})")]
    NodeConvergence { index: usize, residual: f64 },
    #[error("potential is not finite at x = {x}")]
    NonFinitePotential { x: f64 },
    #[error("potential quadrature did not converge with {nodes} nodes (relative change {change:e})")]
    QuadratureConvergence { nodes: usize, change: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("symmetric eigensolver failed to converge")]
    EigenConvergence,
    #[error("requested {requested} values but only {available} are trusted")]
    OutOfTrustedRange { requested: usize, available: usize },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
