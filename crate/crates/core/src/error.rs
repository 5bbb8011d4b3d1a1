//! Error types shared by all modules.

use thiserror::Error;

/// Errors raised by the numeric kernels and evaluators.
///
/// The library never lets a NaN or infinity escape an operation; any
/// computation that would produce one reports [`Error::NonFinite`] instead.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation
    /// (branch cut, pole, excluded region, zero factor).
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested precision exceeds what the operation can deliver.
    #[error("precision error: {0}")]
    Precision(String),

    /// A series or product cannot reach the requested tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// An intermediate value overflowed or became invalid.
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
