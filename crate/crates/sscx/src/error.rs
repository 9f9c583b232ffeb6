use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A configurable or hard cap was exceeded; the computation was not attempted.
    #[error("size limit exceeded: {what} is {actual}, cap is {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    /// The input is structurally outside the supported domain of the operation.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A documented precondition of the operation does not hold for the input.
    #[error("precondition violated: {0}")]
    Contract(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
