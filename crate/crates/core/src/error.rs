use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("length mismatch: expected {expected}, got {actual} ({what})")]
    LengthMismatch { what: &'static str, expected: usize, actual: usize },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("set of {size} vertices exceeds the enumeration cap of {cap}")]
    SizeGuard { size: usize, cap: usize },

    #[error("comparison undecided at the precision cap: {0}")]
    Indeterminate(String),

    #[error("unknown event label {0}")]
    UnknownEvent(usize),

    #[error("improper witness tree: {0}")]
    ImproperTree(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }
}
