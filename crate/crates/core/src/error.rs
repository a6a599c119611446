use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or unsupported group specification.
    #[error("configuration error: {0}")]
    Config(String),
    /// An operation was called outside its precondition.
    #[error("argument error: {0}")]
    Argument(String),
    /// A structural property that the construction relies on failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
