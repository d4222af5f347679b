use sos_moment_sdp::SdpError;
use spectral_ops::SpectralError;
use tensor_core::TensorError;

pub type Result<T> = std::result::Result<T, PseudoError>;

#[derive(Debug, thiserror::Error)]
pub enum PseudoError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("expected a {expected} matrix, got {rows}x{cols}")]
    Shape { expected: String, rows: usize, cols: usize },
    #[error("expected an order-{expected} tensor, got order {got}")]
    Order { expected: usize, got: usize },
    #[error("block B is not positive definite")]
    SingularBlock,
    #[error("no feasible scale below {cap}")]
    Bracket { cap: f64 },
    #[error("pE‖x‖⁴ = {0} is below 1")]
    BelowSphere(f64),
    #[error("mixing weight {epsilon} is below -λ_min = {needed}")]
    MixingTooSmall { epsilon: f64, needed: f64 },
    #[error("precondition `{condition}` failed: {value:e} vs limit {limit:e}")]
    Precondition { condition: &'static str, value: f64, limit: f64 },
    #[error("linear algebra failure: {0}")]
    Lapack(String),
}

impl From<ndarray_linalg::error::LinalgError> for PseudoError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Self::Lapack(e.to_string())
    }
}
