use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("cost guard exceeded: {0}")]
    CostGuard(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
