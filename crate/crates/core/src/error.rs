use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix of {rows}x{cols} exceeds the size cap of {cap} entries")]
    SizeCap {
        rows: usize,
        cols: usize,
        cap: usize,
    },

    #[error("{0} variables exceed the enumeration limit of {1}")]
    TooManyVariables(usize, usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("delta index {index} out of range for dimension {dim}")]
    DeltaIndex { index: usize, dim: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("unbound variable {0}")]
    UnboundVariable(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("malformed network: {0}")]
    Network(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("payoff table: {0}")]
    Payoff(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
