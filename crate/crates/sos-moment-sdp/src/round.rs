use recovery::{Algorithm, RecoveryReport};

use crate::{Result, SdpError, SdpSolution};

/// Normalized first moments `pE x / ‖pE x‖`.
pub fn round_sdp(sol: &SdpSolution) -> Result<RecoveryReport> {
    if !sol.converged {
        return Err(SdpError::NotConverged {
            iterations: sol.iterations,
            primal: sol.primal_residual,
            dual: sol.dual_residual,
        });
    }
    let mean = sol.first_moments();
    let norm = mean.dot(&mean).sqrt();
    if norm < 1e-6 {
        return Err(SdpError::DegenerateRounding(norm));
    }
    Ok(RecoveryReport {
        algorithm: Algorithm::Sdp,
        v: mean / norm,
        inner: None,
        correlation: None,
        corr_sq: None,
        matvecs: 0,
        iterations: sol.iterations,
        converged: true,
        wall_time: sol.wall_time,
        shift: 0.0,
        sign_identifiable: true,
        seed: 0,
        streams: Vec::new(),
    })
}
