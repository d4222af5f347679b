use spectral_ops::SpectralError;
use tensor_core::TensorError;

pub type Result<T> = std::result::Result<T, SdpError>;

#[derive(Debug, thiserror::Error)]
pub enum SdpError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Recovery(#[from] recovery::RecoveryError),
    #[error("dimension {n} exceeds the solver cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("expected an order-{expected} tensor, got order {got}")]
    Order { expected: usize, got: usize },
    #[error("moment matrix of size {got} does not match dimension {expected}")]
    Shape { expected: usize, got: usize },
    #[error("moment matrix is not symmetric (defect {0:e})")]
    NotSymmetric(f64),
    #[error("solver stopped after {iterations} iterations with residuals {primal:e} / {dual:e}")]
    NotConverged { iterations: usize, primal: f64, dual: f64 },
    #[error("first moments vanish (norm {0:e}); rounding is undefined")]
    DegenerateRounding(f64),
    #[error("linear algebra failure: {0}")]
    Lapack(String),
}
