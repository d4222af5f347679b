use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("tensor with {requested} entries exceeds the capacity of {cap} entries")]
    Capacity { requested: u128, cap: usize },
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite entry at offset {0}")]
    NonFinite(usize),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid mode split: {0}")]
    InvalidSplit(String),
    #[error("malformed permutation: {0}")]
    InvalidPermutation(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("noise kind {0:?} cannot be sampled directly; apply an adversary to a Gaussian instance")]
    UnsupportedNoise(crate::NoiseKind),
    #[error("malformed tensor file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, TensorError>;
