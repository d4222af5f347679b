use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not symmetric")]
    NotSymmetric,
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("dimension {dim} exceeds the dense cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("operator needs an order-{expected} tensor, got order {got}")]
    Order { expected: &'static str, got: usize },
    #[error("LAPACK failure: {0}")]
    Lapack(String),
}

pub type Result<T> = std::result::Result<T, SpectralError>;
