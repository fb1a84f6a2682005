use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown state label `{0}`")]
    UnknownLabel(String),

    #[error("invalid state space: {0}")]
    InvalidSpace(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("enumeration budget exceeded: {needed} items requested, budget is {budget}")]
    Budget { needed: String, budget: u64 },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
