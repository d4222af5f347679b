use ndarray::Array1;
use tensor_core::rng::{self, ids};

use crate::{LinearOperator, Result, SpectralError, Transpose};

#[derive(Debug, Clone)]
pub struct PowerOptions {
    /// Stop once `‖Mv - θv‖ ≤ tol·|θ|`.
    pub tol: f64,
    /// Defaults to `10·⌈log₂ dim⌉`.
    pub max_iter: Option<usize>,
    /// Fresh random starts allowed after a start with vanishing image.
    pub restarts: usize,
    pub seed: u64,
    pub stream: u64,
    /// Stop as soon as the Rayleigh quotient of the operator exceeds this value.
    pub stop_above: Option<f64>,
    /// Rerun from the bottom of the spectrum when the shifted run lands on a negative eigenvalue.
    pub floor_reshift: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: None,
            restarts: 3,
            seed: 0,
            stream: ids::POWER_START,
            stop_above: None,
            floor_reshift: true,
        }
    }
}

impl PowerOptions {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Debug, Clone)]
pub struct EigReport {
    /// Eigenvalue estimate of the unshifted operator.
    pub value: f64,
    pub vector: Array1<f64>,
    pub iterations: usize,
    pub matvecs: usize,
    pub residual: f64,
    pub converged: bool,
    pub restarts: usize,
    /// Set when `stop_above` triggered.
    pub exceeded: bool,
    pub shift: f64,
    pub seed: u64,
    pub stream: u64,
}

pub fn default_max_iter(dim: usize) -> usize {
    let bits = (dim.max(2) as f64).log2().ceil() as usize;
    10 * bits.max(1)
}

fn norm(x: &Array1<f64>) -> f64 {
    x.dot(x).sqrt()
}

/// Power iteration on `op - shift·Id`; the reported value is re-shifted back.
pub fn top_singular_shifted(op: &impl LinearOperator, shift: f64, opts: &PowerOptions) -> Result<EigReport> {
    if !op.is_symmetric() {
        return Err(SpectralError::NotSymmetric);
    }
    if !(opts.tol > 0.0) {
        return Err(SpectralError::InvalidTolerance(opts.tol));
    }
    let dim = op.dim();
    let max_iter = opts.max_iter.unwrap_or_else(|| default_max_iter(dim)).max(1);
    let mut rng = rng::stream(opts.seed, opts.stream);
    let mut report = run(op, shift, max_iter, opts, &mut rng)?;
    if opts.floor_reshift && report.value - shift < 0.0 && !report.exceeded && dim > 1 {
        // The dominant eigenvalue of the shifted operator was negative; shifting to the
        // bottom of the spectrum makes the top eigenvalue dominant.
        let first = report.matvecs;
        let first_restarts = report.restarts;
        let mut again = run(op, report.value, max_iter, opts, &mut rng)?;
        again.matvecs += first;
        again.restarts += first_restarts;
        report = again;
    }
    Ok(report)
}

fn run(
    op: &impl LinearOperator,
    shift: f64,
    max_iter: usize,
    opts: &PowerOptions,
    rng: &mut tensor_core::rng::StreamRng,
) -> Result<EigReport> {
    let dim = op.dim();
    let mut matvecs = 0;
    let mut restarts = 0;
    let mut x = rng::unit_vector(rng, dim);
    let mut iterations = 0;
    loop {
        let mut last_theta = 0.0;
        let mut last_residual = f64::INFINITY;
        let mut degenerate = false;
        for it in 0..max_iter {
            let ax = op.apply(x.view());
            matvecs += 1;
            iterations = it + 1;
            if ax.len() != dim {
                return Err(SpectralError::DimensionMismatch { expected: dim, got: ax.len() });
            }
            let y = &ax - &(shift * &x);
            let ny = norm(&y);
            if !(ny > 1e-300) {
                // The start lies in the kernel of the shifted operator.
                degenerate = true;
                break;
            }
            let theta = x.dot(&y);
            let residual = norm(&(&y - &(theta * &x)));
            let value = theta + shift;
            last_theta = theta;
            last_residual = residual;
            let exceeded = opts.stop_above.is_some_and(|t| value > t);
            if residual <= opts.tol * value.abs() || exceeded {
                return Ok(EigReport {
                    value,
                    vector: x,
                    iterations,
                    matvecs,
                    residual,
                    converged: !exceeded || residual <= opts.tol * value.abs(),
                    restarts,
                    exceeded,
                    shift,
                    seed: opts.seed,
                    stream: opts.stream,
                });
            }
            x = y / ny;
        }
        if degenerate && restarts < opts.restarts {
            restarts += 1;
            x = rng::unit_vector(rng, dim);
            continue;
        }
        let value = last_theta + shift;
        return Ok(EigReport {
            value,
            vector: x,
            iterations,
            matvecs,
            residual: last_residual,
            converged: false,
            restarts,
            exceeded: false,
            shift,
            seed: opts.seed,
            stream: opts.stream,
        });
    }
}

/// Top singular value and right singular vector of a general operator via `OᵀO`.
///
/// `residual` refers to the normal operator; `matvecs` counts applications of `O` and `Oᵀ`.
pub fn top_singular_value(op: &impl Transpose, opts: &PowerOptions) -> Result<EigReport> {
    let normal = crate::NormalOp::new(op);
    let mut opts = opts.clone();
    opts.stop_above = opts.stop_above.map(|s| s * s.abs());
    let mut rep = top_singular_shifted(&normal, 0.0, &opts)?;
    rep.matvecs *= 2;
    rep.value = rep.value.max(0.0).sqrt();
    Ok(rep)
}
