//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Operands disagree on qubit count or vector length.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An input violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A dense realization was requested above the desk-scale cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The frame engine only conjugates by Clifford gates.
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),

    /// An expectation value came out with a non-negligible imaginary part.
    #[error("hermiticity violated: {0}")]
    Hermiticity(String),

    /// Experiment configuration failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
