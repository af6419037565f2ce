use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("assignment has {got} entries, graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },

    #[error("node {node} has color {color}, palette size is {k}")]
    ColorOutOfRange { node: usize, color: usize, k: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pairing model gave up after {attempts} restarts (seed {seed})")]
    RetryBudgetExhausted { seed: u64, attempts: usize },

    #[error("non-finite value after layer {layer}")]
    NonFinite { layer: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("search budget of {budget} expansions exceeded")]
    BudgetExceeded { budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
