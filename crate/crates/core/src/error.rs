use thiserror::Error;

/// Errors produced by the library.
///
/// "Not k-invertible" and "exceeds max_k" are ordinary results, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("digon between {0} and {1}")]
    Digon(usize, usize),

    #[error("digraph is not a tournament")]
    NotTournament,

    #[error("family does not decycle the digraph")]
    NotDecycling,

    #[error("vertex counts differ: {0} vs {1}")]
    VertexCountMismatch(usize, usize),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("{what} = {value} exceeds the configured limit {limit}")]
    GuardExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn guard(what: &'static str, value: usize, limit: usize) -> Self {
        Error::GuardExceeded { what, value, limit }
    }
}
