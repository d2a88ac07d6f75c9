use thiserror::Error;

/// Errors produced by parsing and by the verification machinery.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AkhError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid diagram: {0}")]
    Diagram(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("moduli construction failed: {0}")]
    Moduli(String),

    #[error("homology requires d^2 = 0, got a nonzero composite at {0}")]
    NotAComplex(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, AkhError>;
