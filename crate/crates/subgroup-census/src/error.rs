use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("refused: {0}")]
    Refused(String),

    #[error("series did not converge: {0}")]
    NonConvergent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
