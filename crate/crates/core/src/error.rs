use thiserror::Error;

/// Errors raised by evaluation, estimation and I/O routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BwError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The result is not representable (e.g. a division by an underflowed survival).
    #[error("range error: {0}")]
    Range(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("integration error: {0}")]
    Integration(String),
    /// A series expansion was requested outside its validity window.
    #[error("validity error: {0}")]
    Validity(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("report error: {0}")]
    Report(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl BwError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        BwError::Domain(msg.into())
    }
}

impl From<std::io::Error> for BwError {
    fn from(e: std::io::Error) -> Self {
        BwError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, BwError>;
