use thiserror::Error;

/// Errors raised by the library. Non-convergence of a quadrature is not an
/// error; it is reported through `QuadResult::converged`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range (valid: 1..={len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("operation not supported for this spectrum: {0}")]
    UnsupportedSpectrum(String),

    #[error("invalid quadrature specification: {0}")]
    InvalidQuadrature(String),

    #[error("quadrature unavailable: {0}")]
    QuadratureUnavailable(String),

    #[error("profile is not odd: {0}")]
    NotOdd(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
