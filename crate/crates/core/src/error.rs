use thiserror::Error;

/// Errors raised by the card model, the execution engine and the protocol
/// builders.
///
/// Verifier rejections are *not* errors: they are ordinary protocol outcomes
/// reported through [`crate::Verdict`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed sequence: expected exactly one heart, found {hearts}")]
    MalformedSequence { hearts: usize },
    #[error("protocol misuse: {0}")]
    Misuse(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("not simulatable: {0}")]
    NotSimulatable(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn misuse<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Misuse(msg.into()))
}
