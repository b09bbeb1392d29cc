use thiserror::Error;

/// Errors produced by the verification library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A caller broke an API contract, e.g. asked for a rank test on a kernel
    /// that was never declared reversible.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("kernel failure: {0}")]
    Kernel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
