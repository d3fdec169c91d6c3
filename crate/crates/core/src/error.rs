use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (unknown label, non-up-closed set, bad order, ...).
    #[error("input error: {0}")]
    Input(String),
    /// A size guard was exceeded.
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    /// An operation was called outside its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
