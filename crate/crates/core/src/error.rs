use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid margins: {0}")]
    InvalidMargins(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid json: {0}")]
    Json(String),
    #[error("index ({row}, {col}) out of range")]
    OutOfBounds { row: usize, col: usize },
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("partial matrix violates its line bounds")]
    InvalidPartial,
    #[error("matrix is not complete")]
    NotComplete,
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("partial matrix has no completion")]
    NoCompletion,
    #[error("partial matrix has more than one completion")]
    Ambiguous,
    #[error("partial matrix is not contained in the matrix")]
    NotSubset,
    #[error("set is not a defining set")]
    NotDefining,
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("invalid trade: {0}")]
    InvalidTrade(String),
    #[error("cell ({row}, {col}) is not filled in the set")]
    CellNotInSet { row: usize, col: usize },
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("critical set carries no walk certificate")]
    MissingCertificate,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
