use thiserror::Error;

/// Errors raised by the library.
///
/// Each variant belongs to one of three classes (see [`Error::class`]):
/// malformed input, a violated mathematical precondition, or a brute-force
/// oracle asked to work beyond its configured bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan datum: {0}")]
    InvalidCartan(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a positive real root")]
    NotPositiveRealRoot(String),
    #[error("s{vertex} moves the simple root below zero")]
    DownToNegative { vertex: usize },
    #[error("word is not reduced: {0}")]
    NotReduced(String),
    #[error("{0} is not an inversion of the reflection")]
    NotAnInversion(String),
    #[error("field arithmetic: {0}")]
    Field(String),
    #[error("reflection functor undefined at vertex {vertex}")]
    FunctorUndefined { vertex: usize },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error("oracle out of range: {0}")]
    OracleOutOfRange(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Precondition,
    OracleOutOfRange,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidCartan(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch(_)
            | Error::NotPositiveRealRoot(_)
            | Error::Field(_) => ErrorClass::Validation,
            Error::DownToNegative { .. }
            | Error::NotReduced(_)
            | Error::NotAnInversion(_)
            | Error::FunctorUndefined { .. }
            | Error::Postcondition(_) => ErrorClass::Precondition,
            Error::OracleOutOfRange(_) => ErrorClass::OracleOutOfRange,
        }
    }

    /// Exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Validation => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::OracleOutOfRange => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
