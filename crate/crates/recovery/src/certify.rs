use std::time::Instant;

use ndarray::{Array1, ArrayView1};
use spectral_ops::{op_titi, top_singular_shifted, EigReport, PowerOptions, SymmetricPart};
use tensor_core::rng::{self, ids};
use tensor_core::DenseTensor;

use crate::{certificate_scale, CalibrationTable, CertificateReport, RecoveryError, Result, ShiftRule, Verdict};

/// Power steps spent estimating the certified eigenvalue.
pub const DEFAULT_CERT_STEPS: usize = 40;

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub seed: u64,
    pub steps: usize,
    /// Threshold constant; taken from the calibration table when absent.
    pub constant: Option<f64>,
    pub calibration: Option<CalibrationTable>,
    pub expectation: ShiftRule,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { seed: 0, steps: DEFAULT_CERT_STEPS, constant: None, calibration: None, expectation: ShiftRule::Estimated }
    }
}

impl CertifyOptions {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn threshold_constant(&self, n: usize) -> Result<f64> {
        if let Some(c) = self.constant {
            return Ok(c);
        }
        match &self.calibration {
            Some(table) => table.constant_for(n),
            None => CalibrationTable::shipped()?.constant_for(n),
        }
    }
}

/// Top eigenvalue of `sym(Σ_i S_i ⊗ S_i) − c·n·w wᵀ` by a fixed budget of power steps.
///
/// The run starts shifted down by `c·n^{3/2}(ln n)^{1/2}` so that the upper edge dominates.
pub fn certificate_lambda(s: &DenseTensor, expectation: f64, opts: &PowerOptions) -> Result<EigReport> {
    let op = SymmetricPart::new(op_titi(s, false)?.with_expectation_scale(expectation));
    let shift = -certificate_scale(s.dim()) * expectation;
    let mut rep = top_singular_shifted(&op, shift, opts)?;
    rep.matvecs *= 2;
    Ok(rep)
}

/// Certifies `T(x) ≤ τ̂⟨v,x⟩³ + bound` for unit `x`, with `τ̂ = T(v)`.
pub fn certify_titi(t: &DenseTensor, v: ArrayView1<f64>, opts: &CertifyOptions) -> Result<CertificateReport> {
    if t.order() != 3 {
        return Err(RecoveryError::Order { expected: "3", got: t.order() });
    }
    let n = t.dim();
    if v.len() != n {
        return Err(RecoveryError::DimensionMismatch { expected: n, got: v.len() });
    }
    let norm = v.dot(&v).sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(RecoveryError::NotUnit(norm));
    }
    let start = Instant::now();
    let tau_hat = t.eval_poly(v)?;
    let s = t.add_scaled(&DenseTensor::outer_power(v, 3)?, -tau_hat)?;
    let expectation = opts.expectation.resolve(&s, 1.0);

    let constant = opts.threshold_constant(n)?;
    let threshold = constant * certificate_scale(n);
    let power = PowerOptions {
        max_iter: Some(opts.steps),
        seed: opts.seed,
        stream: ids::POWER_START,
        stop_above: Some(threshold),
        ..PowerOptions::default()
    };
    let rep = certificate_lambda(&s, expectation, &power)?;
    let lambda = rep.value;
    let verdict = if !rep.exceeded && lambda <= threshold { Verdict::Certify } else { Verdict::Fail };
    // S(x)² ≤ ⟨x⊗x, Σ S_i⊗S_i x⊗x⟩ ≤ λ + c·n on the sphere.
    let bound = (lambda + expectation * n as f64).max(0.0).sqrt();
    Ok(CertificateReport {
        v: v.to_owned(),
        lambda_cert: lambda,
        tau_hat,
        verdict,
        threshold_constant: constant,
        threshold,
        bound,
        expectation_scale: expectation,
        matvecs: rep.matvecs,
        exceeded: rep.exceeded,
        wall_time: start.elapsed(),
        seed: opts.seed,
    })
}

#[derive(Debug, Clone)]
pub struct SpotCheck {
    pub checked: usize,
    pub violations: usize,
    /// Smallest `τ̂⟨v,x⟩³ + bound − T(x)` seen.
    pub worst_slack: f64,
}

/// Evaluates the certified inequality at `points` random unit vectors and at each extra point
/// (normalized).
pub fn spot_check(
    t: &DenseTensor,
    cert: &CertificateReport,
    points: usize,
    seed: u64,
    extra: &[Array1<f64>],
) -> Result<SpotCheck> {
    let n = t.dim();
    let mut rng = rng::stream(seed, ids::SPOT_CHECK);
    let mut sample: Vec<Array1<f64>> = (0..points).map(|_| rng::unit_vector(&mut rng, n)).collect();
    for x in extra {
        let norm = x.dot(x).sqrt();
        if norm > 0.0 {
            sample.push(x / norm);
        }
    }
    let tol = 1e-9 * (1.0 + cert.tau_hat.abs() + cert.bound);
    let mut out = SpotCheck { checked: 0, violations: 0, worst_slack: f64::INFINITY };
    for x in &sample {
        let lhs = t.eval_poly(x.view())?;
        let rhs = cert.tau_hat * cert.v.dot(x).powi(3) + cert.bound;
        let slack = rhs - lhs;
        out.checked += 1;
        out.worst_slack = out.worst_slack.min(slack);
        if slack < -tol {
            out.violations += 1;
        }
    }
    Ok(out)
}
