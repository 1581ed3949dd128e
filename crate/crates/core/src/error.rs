use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multiplication table is not a group: {0}")]
    InvalidTable(String),
    #[error("action is not by automorphisms: {0}")]
    InvalidAction(String),
    #[error("malformed specification: {0}")]
    MalformedSpec(String),
    #[error("group order {order} exceeds the configured bound {cap}")]
    OrderBoundExceeded { order: usize, cap: usize },
    #[error("subgroup is not normal in {0}")]
    NotNormal(String),
    #[error("element set is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error("unsupported group {0}: irreducible characters are not all monomial")]
    UnsupportedGroup(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
