use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    /// Too many chain runs neither hit zero nor escaped.
    #[error("undecided runs {undecided} of {trials} exceed the allowed fraction; raise the horizon or escape threshold")]
    Undecided { undecided: u64, trials: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
