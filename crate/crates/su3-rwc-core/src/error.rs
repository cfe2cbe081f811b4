use alloc::string::String;
use core::fmt;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A label or argument is outside the domain of the operation.
    Domain(String),
    /// The box counts of a coupling do not add up.
    InvalidCoupling(String),
    /// Division by zero or by a multi-term surd, square root of a non-rational.
    Arithmetic(String),
    /// An internal identity failed; points to a kernel bug, never to bad input.
    Inconsistent(String),
    /// A textual surd could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::InvalidCoupling(m) => write!(f, "invalid coupling: {m}"),
            Error::Arithmetic(m) => write!(f, "arithmetic error: {m}"),
            Error::Inconsistent(m) => write!(f, "internal inconsistency: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
