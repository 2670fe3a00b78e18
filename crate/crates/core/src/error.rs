use std::path::PathBuf;

use crate::action_set::ActionSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("matrix is not skew-symmetric at ({row}, {col})")]
    NotSkewSymmetric { row: usize, col: usize },
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("action subset is empty")]
    EmptySubset,
    #[error("action {action} is outside 1..={n}")]
    OutOfRange { action: usize, n: usize },
    #[error("{0}x{0} matrix has odd dimension")]
    OddDimension(usize),
    #[error("{0}x{0} matrix has even dimension")]
    EvenDimension(usize),
    #[error("not a probability vector: {0}")]
    InvalidStrategy(String),
    #[error("strategy is not optimal")]
    NotOptimal,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("{what} supports at most {max} actions, got {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("{trials} trials is below the minimum of {min}")]
    TooFewTrials { trials: u64, min: u64 },
    #[error("no trial satisfied the conditioning event for {0}")]
    ConditioningEmpty(ActionSet),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
