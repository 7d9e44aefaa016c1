use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (unknown vertex,
    /// `x == y` where distinct vertices are required, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition or an internal invariant of the pipeline does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The input exceeds a configured enumeration limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("parse error at line {line}, offset {offset}: {message}")]
    Parse {
        line: usize,
        offset: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
