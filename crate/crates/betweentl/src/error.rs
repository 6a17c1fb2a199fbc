use thiserror::Error;

/// Errors reported by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("malformed guard: {0}")]
    MalformedGuard(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("position out of range: {0}")]
    OutOfRange(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(char),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("threshold bound {bound} exceeds the unfolding cap {cap}")]
    CapExceeded { bound: u64, cap: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported formula: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
