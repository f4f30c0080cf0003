use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("states belong to different algebras")]
    MismatchedAlgebras,
    #[error("{what} index {index} out of range (have {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },
    #[error("vector is not orthogonal to row {row} of the action matrix")]
    NotInKernel { row: usize },
    #[error(
        "action matrix has rank {rank} < {rows} rows; the action is not faithful, \
         quotient g by the kernel of the action (drop dependent rows) and retry"
    )]
    RankDeficient { rank: usize, rows: usize },
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    InvalidInput(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
