use std::time::Instant;

use spectral_ops::{op_titi, top_singular_value};
use tensor_core::rng::ids;
use tensor_core::DenseTensor;

use crate::linalg::top_left_singular;
use crate::unfold::unit;
use crate::{Algorithm, RecoveryError, RecoveryOptions, RecoveryReport, Result};

/// Top singular vector of the centered `Σ_i T_i ⊗ T_i`, folded to an n×n matrix whose top
/// singular vector estimates the planted vector.
pub fn recover_titi(t: &DenseTensor, opts: &RecoveryOptions) -> Result<RecoveryReport> {
    if t.order() != 3 {
        return Err(RecoveryError::Order { expected: "3", got: t.order() });
    }
    let start = Instant::now();
    let n = t.dim();
    let scale = opts.shift.resolve(t, 1.0);
    let op = op_titi(t, false)?.with_expectation_scale(scale);
    let rep = top_singular_value(&op, &opts.power(opts.seed))?;

    let folded = rep.vector.view().into_shape_with_order((n, n)).expect("n² vector");
    let mut v = top_left_singular(folded.t())?;
    if t.eval_poly(v.view())? < 0.0 {
        v.mapv_inplace(|x| -x);
    }
    Ok(RecoveryReport {
        algorithm: Algorithm::Titi,
        v: unit(v),
        inner: None,
        correlation: None,
        corr_sq: None,
        matvecs: rep.matvecs,
        iterations: rep.iterations,
        converged: rep.converged,
        wall_time: start.elapsed(),
        shift: scale,
        sign_identifiable: true,
        seed: opts.seed,
        streams: vec![ids::POWER_START],
    })
}
