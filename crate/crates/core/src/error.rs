use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("depth mismatch: expected {expected}, found {found}")]
    DepthMismatch { expected: u32, found: u32 },

    #[error("level {level} exceeds depth {depth}")]
    LevelOutOfRange { level: u32, depth: u32 },

    #[error("depth {0} exceeds the supported maximum of {max}", max = crate::dyadic::MAX_DEPTH)]
    DepthTooLarge(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weight value {value} at cell {index} is not strictly positive")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("point outside the domain: {0}")]
    DomainViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integrand is not predictable: it reads the path {0} step(s) ahead")]
    NonPredictable(i32),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
