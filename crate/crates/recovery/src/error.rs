use spectral_ops::SpectralError;
use tensor_core::TensorError;

pub type Result<T> = std::result::Result<T, RecoveryError>;

#[derive(Debug, thiserror::Error)]
pub enum RecoveryError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("expected an order-{expected} tensor, got order {got}")]
    Order { expected: &'static str, got: usize },
    #[error("vector must have unit norm, got norm {0}")]
    NotUnit(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unfolding Gram matrix is singular (smallest eigenvalue {0:e})")]
    SingularGram(f64),
    #[error("could not draw a partition with three nonempty blocks after {0} attempts")]
    DegeneratePartition(usize),
    #[error("calibration: {0}")]
    Calibration(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
