use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::rng::{self, ids};
use crate::tensor::checked_len;
use crate::{DenseTensor, Result, TensorError, DEFAULT_MAX_ENTRIES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    IidGaussian,
    SymmetricGaussian,
    SemiRandom,
}

/// `T = τ·v0^{⊗k} + A` with its ground truth.
#[derive(Debug, Clone)]
pub struct SpikedInstance {
    pub tensor: DenseTensor,
    pub tau: f64,
    pub v0: Array1<f64>,
    pub noise_kind: NoiseKind,
    pub seed: u64,
}

impl SpikedInstance {
    pub fn n(&self) -> usize {
        self.tensor.dim()
    }

    pub fn order(&self) -> usize {
        self.tensor.order()
    }
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub n: usize,
    pub k: usize,
    pub tau: f64,
    pub noise: NoiseKind,
    pub seed: u64,
    /// Planted direction; normalized on use. Drawn from the seed when absent.
    pub v0: Option<Array1<f64>>,
    /// Drops the noise term entirely.
    pub zero_noise: bool,
    pub max_entries: usize,
}

impl GenOptions {
    pub fn new(n: usize, k: usize, tau: f64, noise: NoiseKind, seed: u64) -> Self {
        Self { n, k, tau, noise, seed, v0: None, zero_noise: false, max_entries: DEFAULT_MAX_ENTRIES }
    }
}

pub fn gen_spiked(n: usize, k: usize, tau: f64, noise: NoiseKind, seed: u64) -> Result<SpikedInstance> {
    gen_spiked_with(&GenOptions::new(n, k, tau, noise, seed))
}

pub fn gen_spiked_with(opts: &GenOptions) -> Result<SpikedInstance> {
    let GenOptions { n, k, tau, noise, seed, .. } = *opts;
    if n < 2 || k < 3 {
        return Err(TensorError::InvalidDimensions(format!("need n >= 2 and k >= 3, got n={n}, k={k}")));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(TensorError::InvalidDimensions(format!("tau must be finite and >= 0, got {tau}")));
    }
    if noise == NoiseKind::SemiRandom {
        return Err(TensorError::UnsupportedNoise(noise));
    }
    let len = checked_len(k, n, opts.max_entries)?;
    let v0 = match &opts.v0 {
        Some(v) => {
            if v.len() != n {
                return Err(TensorError::DimensionMismatch { expected: n, got: v.len() });
            }
            let norm = v.dot(v).sqrt();
            if !(norm > 0.0) {
                return Err(TensorError::InvalidDimensions("planted vector is zero".into()));
            }
            v / norm
        }
        None => rng::unit_vector(&mut rng::stream(seed, ids::SIGNAL), n),
    };
    let noise_tensor = if opts.zero_noise {
        DenseTensor::from_vec(k, n, vec![0.0; len])?
    } else {
        let raw = DenseTensor::from_vec(k, n, rng::gaussian_vec(&mut rng::stream(seed, ids::NOISE), len))?;
        match noise {
            NoiseKind::IidGaussian => raw,
            _ => raw.symmetrize(),
        }
    };
    let tensor = noise_tensor.add_scaled(&DenseTensor::outer_power(v0.view(), k)?, tau)?;
    Ok(SpikedInstance { tensor, tau, v0, noise_kind: noise, seed })
}
