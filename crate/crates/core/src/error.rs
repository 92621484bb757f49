use thiserror::Error;

/// Errors raised by profile construction and by probe/ordering entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a profile must contain at least one individual")]
    EmptyProfile,
    #[error("well-being levels must be finite, found {0}")]
    NonFinite(f64),
    #[error("parse error at token {position} ({token:?}): {reason}")]
    Parse {
        position: usize,
        token: String,
        reason: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
