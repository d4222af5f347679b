use serde::{Deserialize, Serialize};
use spectral_ops::PowerOptions;
use tensor_core::rng::{derive_seed, ids};
use tensor_core::{gen_spiked, NoiseKind};

use crate::{certificate_lambda, RecoveryError, Result, ShiftRule, DEFAULT_CERT_STEPS};

const SHIPPED: &str = include_str!("../data/titi_calibration.json");

/// `n^{3/2} (ln n)^{1/2}`, the scale of the certified eigenvalue under pure noise.
pub fn certificate_scale(n: usize) -> f64 {
    let n = n as f64;
    n.powf(1.5) * n.ln().max(f64::MIN_POSITIVE).sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CalibrationEntry {
    pub n: usize,
    /// Quantile of `λ / certificate_scale(n)` over pure-noise trials.
    pub constant: f64,
    /// Fraction of trials above the constant.
    pub exceed_rate: f64,
}

/// Pure-noise threshold constants for `certify_titi`, per dimension.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CalibrationTable {
    pub quantile: f64,
    pub trials: usize,
    pub seed: u64,
    /// Power steps (or solver iterations) per trial.
    #[serde(alias = "power_steps")]
    pub budget: usize,
    pub entries: Vec<CalibrationEntry>,
}

impl CalibrationTable {
    pub fn shipped() -> Result<Self> {
        Self::from_json(SHIPPED)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut table: Self = serde_json::from_str(s)?;
        if table.entries.is_empty() {
            return Err(RecoveryError::Calibration("empty table".into()));
        }
        table.entries.sort_by_key(|e| e.n);
        Ok(table)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Linear interpolation in `n`, clamped at both ends of the table.
    pub fn constant_for(&self, n: usize) -> Result<f64> {
        let e = &self.entries;
        let first = e.first().ok_or_else(|| RecoveryError::Calibration("empty table".into()))?;
        let last = e.last().expect("nonempty");
        if n <= first.n {
            return Ok(first.constant);
        }
        if n >= last.n {
            return Ok(last.constant);
        }
        let hi = e.iter().position(|x| x.n >= n).expect("inside range");
        let (a, b) = (&e[hi - 1], &e[hi]);
        let w = (n - a.n) as f64 / (b.n - a.n) as f64;
        Ok(a.constant + w * (b.constant - a.constant))
    }

    pub fn threshold(&self, n: usize) -> Result<f64> {
        Ok(self.constant_for(n)? * certificate_scale(n))
    }
}

/// Type-7 sample quantile (linear interpolation between order statistics).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    let h = (v.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

/// Normalized certified eigenvalues of pure iid noise, one per trial.
pub fn pure_noise_statistics(n: usize, trials: usize, seed: u64, steps: usize) -> Result<Vec<f64>> {
    (0..trials)
        .map(|rep| {
            let trial_seed = derive_seed(seed, &[n as u64, rep as u64]);
            let a = gen_spiked(n, 3, 0.0, NoiseKind::IidGaussian, trial_seed)?.tensor;
            let c = ShiftRule::Estimated.resolve(&a, 1.0);
            let power = PowerOptions {
                max_iter: Some(steps),
                seed: trial_seed,
                stream: ids::POWER_START,
                ..PowerOptions::default()
            };
            Ok(certificate_lambda(&a, c, &power)?.value / certificate_scale(n))
        })
        .collect()
}

pub fn calibrate_titi(n_list: &[usize], trials: usize, seed: u64, q: f64) -> Result<CalibrationTable> {
    let mut entries = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let stats = pure_noise_statistics(n, trials, seed, DEFAULT_CERT_STEPS)?;
        let constant = quantile(&stats, q);
        let exceed_rate = stats.iter().filter(|&&s| s > constant).count() as f64 / stats.len() as f64;
        entries.push(CalibrationEntry { n, constant, exceed_rate });
    }
    entries.sort_by_key(|e| e.n);
    Ok(CalibrationTable { quantile: q, trials, seed, budget: DEFAULT_CERT_STEPS, entries })
}
