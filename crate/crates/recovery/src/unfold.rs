use std::time::Instant;

use ndarray::Array1;
use spectral_ops::{top_singular_shifted, GramOp};
use tensor_core::rng::ids;
use tensor_core::DenseTensor;

use crate::linalg::top_left_singular;
use crate::{Algorithm, RecoveryOptions, RecoveryReport, Result, ShiftRule};

/// Top eigenvector of `U Uᵀ` for the squarest unfolding `U`, folded back to `R^n`.
///
/// Odd orders use `⌊k/2⌋` row modes and fix the sign so that `T(v) ≥ 0`; even orders use
/// the square unfolding and leave the sign arbitrary.
pub fn recover_unfold(t: &DenseTensor, opts: &RecoveryOptions) -> Result<RecoveryReport> {
    let start = Instant::now();
    let (k, n) = (t.order(), t.dim());
    let row_modes = k / 2;
    let col_modes = k - row_modes;
    let op = GramOp::new(t, row_modes);
    let shift = opts.shift.resolve(t, (n as f64).powi(col_modes as i32));
    let rep = top_singular_shifted(&op, shift, &opts.power(opts.seed))?;

    let mut v = if row_modes == 1 {
        rep.vector.clone()
    } else {
        let w = rep.vector.view().into_shape_with_order((n, n.pow(row_modes as u32 - 1))).expect("contiguous");
        top_left_singular(w)?
    };
    let odd = k % 2 == 1;
    if odd && t.eval_poly(v.view())? < 0.0 {
        v.mapv_inplace(|x| -x);
    }
    let algorithm = if opts.shift == ShiftRule::None { Algorithm::UnfoldNaive } else { Algorithm::Unfold };
    Ok(RecoveryReport {
        algorithm,
        v: unit(v),
        inner: None,
        correlation: None,
        corr_sq: None,
        matvecs: rep.matvecs,
        iterations: rep.iterations,
        converged: rep.converged,
        wall_time: start.elapsed(),
        shift,
        sign_identifiable: odd,
        seed: opts.seed,
        streams: vec![ids::POWER_START],
    })
}

pub(crate) fn unit(v: Array1<f64>) -> Array1<f64> {
    crate::linalg::normalize(v)
}
