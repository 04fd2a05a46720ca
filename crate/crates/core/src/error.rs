use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system `{descriptor}`: {reason}")]
    InvalidSystem { descriptor: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0:?} is not a root of this system")]
    NotARoot(Vec<i32>),

    #[error("invalid diagram automorphism: {0}")]
    InvalidSigma(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} has {size} elements, exceeding the cap of {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("internal error: {0}")]
    Internal(String),
}
