use alloc::string::String;
use core::fmt;

/// Errors produced by norm evaluation, search, and verification routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must share a length or shape do not.
    DimensionMismatch { expected: usize, got: usize },
    /// An input violates a mathematical precondition (zero vector,
    /// unnormalized weights, non-positive-definite Gram matrix, ...).
    Domain(String),
    /// The requested exponent regime is outside the operation's contract.
    Precondition(String),
    /// The operation does not support this input class at all.
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: &str) -> Error {
    Error::Domain(String::from(msg))
}

pub(crate) fn precondition(msg: &str) -> Error {
    Error::Precondition(String::from(msg))
}

pub(crate) fn unsupported(msg: &str) -> Error {
    Error::Unsupported(String::from(msg))
}
