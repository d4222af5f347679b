use serde::{Deserialize, Serialize};
use sos_moment_sdp::MomentMatrix;

use crate::{PseudoError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereCorrectionReport {
    /// `pE0 ‖x‖⁴`.
    pub c: f64,
    /// Largest change of a degree-1 moment relative to `pE0/c`.
    pub delta1: f64,
    /// Largest change of an off-diagonal degree-2 moment.
    pub delta2: f64,
    /// Largest spread of the diagonal degree-2 changes around their mean.
    pub delta2_prime: f64,
    /// `-(c-1)/c - 2nδ₁ - (3n²+2n)δ₂ - (2√n(n+1)+n)δ₂′`.
    pub lambda_min_bound: f64,
    /// Measured `λ_min` of the corrected functional, once computed.
    pub lambda_min: Option<f64>,
}

/// Maps `pE0` to a functional with `‖x‖² − 1` in its kernel: degree 0 stays, degrees 3 and 4 are
/// divided by `c`, degrees 1 and 2 take the value of `pE0 p(x)‖x‖² / c`.
pub fn sphere_correct(pe0: &MomentMatrix) -> Result<(MomentMatrix, SphereCorrectionReport)> {
    let n = pe0.n();
    let c = pe0.norm4();
    // Rounding in `Σ_kl` may leave an exactly-spherical start a few ulps below 1.
    if !(c >= 1.0 - 1e-12) {
        return Err(PseudoError::BelowSphere(c));
    }
    let one = pe0.pe_one();
    let q = pe0.quartic_block();
    let cub = pe0.cubic_block();
    let mut s1 = vec![0.0; n];
    let mut s2 = ndarray::Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for k in 0..n {
            s1[i] += cub[[i, k * n + k]];
        }
        for j in 0..n {
            s2[[i, j]] = (0..n).map(|k| q[[i * n + j, k * n + k]]).sum::<f64>() / c;
        }
        s1[i] /= c;
    }
    let l = MomentMatrix::from_monomial_fn(n, |idx| match idx {
        [] => one,
        [i] => s1[*i],
        [i, j] => s2[[*i, *j]],
        _ => pe0.monomial(idx) / c,
    });

    let first = pe0.first_moments();
    let second = pe0.second_moments();
    let delta1 = (0..n).fold(0.0_f64, |a, i| a.max((s1[i] - first[i] / c).abs()));
    let mut delta2 = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                delta2 = delta2.max((s2[[i, j]] - second[[i, j]] / c).abs());
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| s2[[i, i]] - second[[i, i]] / c).collect();
    let mean = diag.iter().sum::<f64>() / n as f64;
    let delta2_prime = diag.iter().fold(0.0_f64, |a, d| a.max((d - mean).abs()));
    let nf = n as f64;
    let lambda_min_bound = -(c - 1.0) / c
        - 2.0 * nf * delta1
        - (3.0 * nf * nf + 2.0 * nf) * delta2
        - (2.0 * nf.sqrt() * (nf + 1.0) + nf) * delta2_prime;
    Ok((l, SphereCorrectionReport { c, delta1, delta2, delta2_prime, lambda_min_bound, lambda_min: None }))
}
