use std::fmt;
use std::time::Duration;

use ndarray::{Array1, ArrayView1};
use spectral_ops::PowerOptions;
use tensor_core::rng::ids;

use crate::ShiftRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Unfold,
    UnfoldNaive,
    Titi,
    Symmetric,
    Sdp,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Unfold => "unfold",
            Self::UnfoldNaive => "unfold_naive",
            Self::Titi => "titi",
            Self::Symmetric => "symmetric",
            Self::Sdp => "sdp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryOptions {
    pub seed: u64,
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub shift: ShiftRule,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self { seed: 0, tol: 1e-8, max_iter: None, shift: ShiftRule::Estimated }
    }
}

impl RecoveryOptions {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn with_shift(mut self, shift: ShiftRule) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }

    pub(crate) fn power(&self, seed: u64) -> PowerOptions {
        PowerOptions { tol: self.tol, max_iter: self.max_iter, seed, stream: ids::POWER_START, ..PowerOptions::default() }
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub algorithm: Algorithm,
    /// Unit-norm estimate of the planted vector.
    pub v: Array1<f64>,
    /// `⟨v, v0⟩`, when the truth is known.
    pub inner: Option<f64>,
    pub correlation: Option<f64>,
    pub corr_sq: Option<f64>,
    pub matvecs: usize,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: Duration,
    /// Shift (or subtracted expectation coefficient) actually used.
    pub shift: f64,
    /// False for even orders, where only `±v0` is recoverable.
    pub sign_identifiable: bool,
    pub seed: u64,
    pub streams: Vec<u64>,
}

impl RecoveryReport {
    pub fn with_truth(mut self, v0: ArrayView1<f64>) -> Self {
        let ip = self.v.dot(&v0);
        self.inner = Some(ip);
        self.correlation = Some(ip.abs());
        self.corr_sq = Some(ip * ip);
        self
    }

    pub fn wall_ms(&self) -> f64 {
        self.wall_time.as_secs_f64() * 1e3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certify,
    Fail,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Certify => "certify",
            Self::Fail => "fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of certifying `T(x) ≤ τ̂⟨v,x⟩³ + bound` on the unit sphere.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub v: Array1<f64>,
    /// Largest eigenvalue of the symmetrized, centered `Σ S_i ⊗ S_i` (a lower estimate when `exceeded`).
    pub lambda_cert: f64,
    pub tau_hat: f64,
    pub verdict: Verdict,
    pub threshold_constant: f64,
    pub threshold: f64,
    /// Additive slack in the certified inequality.
    pub bound: f64,
    /// Coefficient of the subtracted `n·w wᵀ`.
    pub expectation_scale: f64,
    pub matvecs: usize,
    pub exceeded: bool,
    pub wall_time: Duration,
    pub seed: u64,
}
