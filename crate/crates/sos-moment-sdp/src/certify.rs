use std::time::Instant;

use ndarray::ArrayView1;
use recovery::{quantile, CalibrationEntry, CalibrationTable, CertificateReport, Verdict};
use tensor_core::rng::derive_seed;
use tensor_core::{gen_spiked, DenseTensor, NoiseKind};

use crate::{solve_moment_sdp, RankOneShift, Result, SdpError, SdpOptions};

const SHIPPED: &str = include_str!("../data/sdp_calibration.json");

/// `n^{3/4} (ln n)^{1/4}`, the scale of the relaxation value under pure noise.
pub fn sdp_scale(n: usize) -> f64 {
    let n = n as f64;
    n.powf(0.75) * n.ln().max(f64::MIN_POSITIVE).powf(0.25)
}

#[derive(Debug, Clone, Default)]
pub struct SdpCertifyOptions {
    pub constant: Option<f64>,
    pub calibration: Option<CalibrationTable>,
    pub solver: SdpOptions,
}

impl SdpCertifyOptions {
    pub fn threshold_constant(&self, n: usize) -> Result<f64> {
        if let Some(c) = self.constant {
            return Ok(c);
        }
        Ok(match &self.calibration {
            Some(table) => table.constant_for(n)?,
            None => CalibrationTable::from_json(SHIPPED)?.constant_for(n)?,
        })
    }
}

/// Certifies `T(x) ≤ τ̂⟨v,x⟩³ + bound` on the sphere, where `bound` is the relaxation value of
/// `T(x) − τ̂⟨v,x⟩³` and `τ̂ = T(v)`.
pub fn certify_sdp(t: &DenseTensor, v: ArrayView1<f64>, opts: &SdpCertifyOptions) -> Result<CertificateReport> {
    let n = t.dim();
    if v.len() != n {
        return Err(SdpError::Shape { expected: n, got: v.len() });
    }
    let norm = v.dot(&v).sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(recovery::RecoveryError::NotUnit(norm).into());
    }
    let start = Instant::now();
    let tau_hat = t.eval_poly(v)?;
    let shift = RankOneShift { tau: tau_hat, v: v.to_owned() };
    let sol = solve_moment_sdp(t, Some(&shift), &opts.solver)?;
    if !sol.converged {
        return Err(SdpError::NotConverged {
            iterations: sol.iterations,
            primal: sol.primal_residual,
            dual: sol.dual_residual,
        });
    }
    let constant = opts.threshold_constant(n)?;
    let threshold = constant * sdp_scale(n);
    let value = sol.objective;
    let verdict = if value <= threshold { Verdict::Certify } else { Verdict::Fail };
    Ok(CertificateReport {
        v: v.to_owned(),
        lambda_cert: value,
        tau_hat,
        verdict,
        threshold_constant: constant,
        threshold,
        bound: value.max(0.0),
        expectation_scale: 0.0,
        matvecs: 0,
        exceeded: false,
        wall_time: start.elapsed(),
        seed: 0,
    })
}

/// Quantile of the relaxation value of pure iid noise over `sdp_scale(n)`, per dimension.
pub fn calibrate_sdp(n_list: &[usize], trials: usize, seed: u64, q: f64, opts: &SdpOptions) -> Result<CalibrationTable> {
    let mut entries = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let mut stats = Vec::with_capacity(trials);
        for rep in 0..trials {
            let trial_seed = derive_seed(seed, &[n as u64, rep as u64]);
            let a = gen_spiked(n, 3, 0.0, NoiseKind::IidGaussian, trial_seed)?.tensor;
            let sol = solve_moment_sdp(&a, None, opts)?;
            if !sol.converged {
                return Err(SdpError::NotConverged {
                    iterations: sol.iterations,
                    primal: sol.primal_residual,
                    dual: sol.dual_residual,
                });
            }
            stats.push(sol.objective / sdp_scale(n));
        }
        let constant = quantile(&stats, q);
        let exceed_rate = stats.iter().filter(|&&s| s > constant).count() as f64 / trials as f64;
        entries.push(CalibrationEntry { n, constant, exceed_rate });
    }
    entries.sort_by_key(|e| e.n);
    Ok(CalibrationTable { quantile: q, trials, seed, budget: opts.max_iter, entries })
}
