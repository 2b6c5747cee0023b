use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: {x} x-values but {y} y-values")]
    LengthMismatch { x: usize, y: usize },

    #[error("index {index} out of range for buffer of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("knapsack capacity {capacity} outside [0, {len}]")]
    CapacityOutOfRange { capacity: f64, len: usize },

    #[error("all x-values coincide; no non-vertical line passes through two points")]
    DegenerateAbscissae,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("series too short: {kept} samples after dropping {dropped} nulls (need at least {min})")]
    SeriesTooShort {
        kept: usize,
        dropped: usize,
        min: usize,
    },

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("no benchmark records")]
    EmptyRecords,

    #[error("conflicting records for solver `{solver}` on problem {problem}")]
    ConflictingRecords { solver: String, problem: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
