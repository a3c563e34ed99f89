use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum G2Error {
    #[error("polynomials or fields from different coordinate contexts")]
    ContextMismatch,
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("unknown catalog entry: {0}")]
    UnknownCatalog(String),
}

pub type Result<T> = std::result::Result<T, G2Error>;
