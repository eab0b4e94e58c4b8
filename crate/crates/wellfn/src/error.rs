use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a precondition (non-positive, non-finite, out of range).
    #[error("domain error: {0}")]
    Domain(String),
    /// A grid specification cannot be realized.
    #[error("invalid grid: {0}")]
    Grid(String),
    /// The least-squares optimizer could not proceed.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
