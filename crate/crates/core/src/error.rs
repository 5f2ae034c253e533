use thiserror::Error;

/// Errors surfaced by the simulator library.
///
/// The CLI maps `InvalidParams` and `Config` to exit code 1 and everything
/// else to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Physical or variational parameters violate an invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A run configuration (flags, config file, sweep grids) is unusable.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Operands disagree on system size or matrix dimension.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A dense realization would exceed the configured size budget.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// A numerical sanity check failed (non-Hermitian input, NaN, ...).
    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
