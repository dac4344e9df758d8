use std::io;

use thiserror::Error;

/// Failure categories shared by every module.
///
/// The CLI maps these onto process exit codes, so the variants are grouped by
/// how a caller should react rather than by which module raised them.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An index or horizon lies outside the data that was computed.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A configured budget (word length, position width, subset count) would be exceeded.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Internal cross-checks disagree, or persisted data is corrupt.
    #[error("integrity: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}

pub(crate) use ensure;
