use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("not finite-to-one: {0}")]
    NotFiniteToOne(String),
    #[error("ambient group mismatch")]
    AmbientMismatch,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("map is not continuous: {0}")]
    Discontinuous(String),
    #[error("not a cover")]
    NotACover,
    #[error("contractivity violated at step {0}")]
    NotContractive(usize),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn cap(msg: impl Into<String>) -> Error {
    Error::Cap(msg.into())
}
