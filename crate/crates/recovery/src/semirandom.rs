use ndarray::{Array1, Array2};
use spectral_ops::dense_eig_oracle;
use tensor_core::{DenseTensor, NoiseKind, SpikedInstance};

use crate::{RecoveryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryMode {
    /// `Q = n·M^{-1/2}` with `M` the Gram matrix of the flattening.
    Whitening,
    Custom,
}

/// Right action `T ↦ T·Q` on the n²×n flattening.
#[derive(Debug, Clone)]
pub struct SemiRandomAdversary {
    pub q: Array2<f64>,
    pub mode: AdversaryMode,
    /// `‖Q − Id‖` in operator norm.
    pub q_minus_id_norm: f64,
}

impl SemiRandomAdversary {
    pub fn identity(n: usize) -> Self {
        Self { q: Array2::eye(n), mode: AdversaryMode::Custom, q_minus_id_norm: 0.0 }
    }

    pub fn custom(q: Array2<f64>) -> Result<Self> {
        if q.nrows() != q.ncols() {
            return Err(RecoveryError::DimensionMismatch { expected: q.nrows(), got: q.ncols() });
        }
        if q.iter().any(|x| !x.is_finite()) {
            return Err(RecoveryError::Spectral(spectral_ops::SpectralError::NonFinite));
        }
        let d = &q - &Array2::<f64>::eye(q.nrows());
        let gram = d.t().dot(&d);
        let top = dense_eig_oracle(&((&gram + &gram.t()) * 0.5))?.values[0];
        Ok(Self { q, mode: AdversaryMode::Custom, q_minus_id_norm: top.max(0.0).sqrt() })
    }

    /// Whitens the flattening so that `(TQ)ᵀ(TQ) = n²·Id`.
    pub fn whitening(t: &DenseTensor) -> Result<Self> {
        if t.order() != 3 {
            return Err(RecoveryError::Order { expected: "3", got: t.order() });
        }
        let n = t.dim();
        let g = t.matrix(1);
        let m = g.dot(&g.t());
        let spec = dense_eig_oracle(&((&m + &m.t()) * 0.5))?;
        let min = spec.values[n - 1];
        if !(min > 1e-12 * spec.values[0].abs()) {
            return Err(RecoveryError::SingularGram(min));
        }
        let inv_sqrt: Array1<f64> = spec.values.mapv(|l| n as f64 / l.sqrt());
        let q = (&spec.vectors * &inv_sqrt.view().insert_axis(ndarray::Axis(0))).dot(&spec.vectors.t());
        let dev = spec.values.iter().map(|l| (n as f64 / l.sqrt() - 1.0).abs()).fold(0.0, f64::max);
        Ok(Self { q, mode: AdversaryMode::Whitening, q_minus_id_norm: dev })
    }

    /// `‖Q − Id‖ · n^{1/4}`, bounded for admissible adversaries.
    pub fn scaled_deviation(&self) -> f64 {
        self.q_minus_id_norm * (self.q.nrows() as f64).powf(0.25)
    }
}

/// Instance whose flattening is `T·Q`: `T'[i,j,l] = Σ_a Q[a,i] T[a,j,l]`.
pub fn apply_semirandom(inst: &SpikedInstance, adv: &SemiRandomAdversary) -> Result<SpikedInstance> {
    let t = &inst.tensor;
    if t.order() != 3 {
        return Err(RecoveryError::Order { expected: "3", got: t.order() });
    }
    if adv.q.nrows() != t.dim() {
        return Err(RecoveryError::DimensionMismatch { expected: t.dim(), got: adv.q.nrows() });
    }
    let tensor = t.mode_product(0, adv.q.t())?;
    Ok(SpikedInstance {
        tensor,
        tau: inst.tau,
        v0: inst.v0.clone(),
        noise_kind: NoiseKind::SemiRandom,
        seed: inst.seed,
    })
}
