use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported step length {step}: {reason}")]
    UnsupportedStep { step: usize, reason: String },
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
