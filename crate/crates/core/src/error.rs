use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("size mismatch: expected {expected} values, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("invalid exponent {name} = {value}")]
    InvalidExponent { name: &'static str, value: f64 },

    #[error("J_max = {j_max} is not resolved on a grid with {n} points per axis")]
    PartitionTooFine { j_max: u32, n: usize },

    #[error("block index {index} outside 0..={j_max}")]
    IndexOutOfRange { index: i64, j_max: u32 },

    #[error("input is not resolved: {ratio:.3e} of its energy lies above the top corona")]
    Unresolved { ratio: f64 },

    #[error("expected a real-valued function (max imaginary part {0:.3e})")]
    NotReal(f64),

    #[error("invalid norm specification: {0}")]
    InvalidSpec(String),

    #[error("derivative of order (l={l}, m={m}) unavailable and finite differences disabled")]
    DerivativeUnavailable { l: u32, m: u32 },

    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),

    #[error("missing data: {0}")]
    Missing(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
