use thiserror::Error;

/// Errors raised by constructors, checks, and numeric kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weight {index} = {value} exceeds the declared supremum {declared_sup}")]
    Integrity {
        index: usize,
        value: f64,
        declared_sup: f64,
    },

    #[error("lambda lies in the (approximate) left spectrum at resolution N = {resolution}: sigma_min = {sigma_min:e}")]
    NearLeftSpectrum { resolution: usize, sigma_min: f64 },

    #[error("quadrature did not converge: achieved error estimate {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("measure is not a probability measure (total mass {total})")]
    NotProbability { total: f64 },

    #[error("slice {index} is undefined: normalizing moment vanishes")]
    SliceUndefined { index: usize },

    #[error("negative mass {mass} in decomposition; y0 lies outside the subnormality interval")]
    NegativeMass { mass: f64 },

    #[error("matrix is not symmetric: |M[{row}][{col}] - M[{col}][{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("operation requires family {expected}, diagram has {found}")]
    WrongFamily { expected: String, found: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
