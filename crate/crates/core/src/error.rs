//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the radar-vitals toolkit.
///
/// Variants map onto the CLI exit codes: configuration problems,
/// malformed or inconsistent data, signal-processing preconditions,
/// and the "no targets detected" outcome that is an expected result
/// rather than a crash.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("signal error: {0}")]
    Signal(String),

    #[error("no targets detected")]
    NoTargets,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn signal(msg: impl Into<String>) -> Self {
        Error::Signal(msg.into())
    }
}
