use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use sos_moment_sdp::MomentMatrix;
use tensor_core::{rng, DenseTensor, Permutation};

use crate::spectrum::mix_unchecked;
use crate::{
    identity_orbit, lambda_min_functional, mixing_weight, reduce_pairs, sphere_correct, sym_project, symmetry,
    uniform_matrix, uniform_moments, ConstructionParams, Provenance, PseudoError, PseudoExpectation, Result,
    SphereCorrectionReport,
};

pub const SHIPPED_PRECONDITIONS: &str = include_str!("../data/lb_preconditions.json");

/// Numeric stand-ins for the asymptotic preconditions of one construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbConfig {
    /// `C` in the default `λ` for this degree.
    pub lambda_constant: f64,
    /// Lower limit on the normalized correlation of `A` with its symmetrization.
    pub correlation_min: f64,
    /// Upper limit on the normalized identity-trace statistic.
    pub trace_max: f64,
    /// Upper limit on the weighted sum of sphere deviations.
    pub delta_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreconditionTable {
    pub trials: usize,
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub deg3: LbConfig,
    pub deg4: LbConfig,
}

impl PreconditionTable {
    pub fn shipped() -> Self {
        serde_json::from_str(SHIPPED_PRECONDITIONS).expect("shipped precondition table parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(std::fs::File::open(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        serde_json::to_writer_pretty(std::fs::File::create(path)?, self)?;
        Ok(())
    }
}

/// `C·n^{3/4}·ln(n)^{1/4}`.
pub fn deg3_lambda(n: usize, constant: f64) -> f64 {
    let nf = n as f64;
    constant * nf.powf(0.75) * nf.ln().max(0.0).powf(0.25)
}

/// `√(C·n)`.
pub fn deg4_lambda(n: usize, constant: f64) -> f64 {
    (constant * n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreconditionReport {
    pub correlation: f64,
    /// Shift `s` for which every spectral matrix plus `s·Id` was found PSD.
    pub spectral_shift: f64,
    /// Smallest spectral eigenvalue, when it was measured.
    pub spectral_min: Option<f64>,
    pub trace: f64,
    pub delta_sum: f64,
    /// Uniform quartic mass added to make the degree-4 start PSD.
    pub quartic_top_up: Option<f64>,
}

/// Replaces a failed precondition by the uniform distribution; other errors pass through.
pub fn or_uniform(res: Result<PseudoExpectation>, n: usize) -> Result<PseudoExpectation> {
    match res {
        Err(PseudoError::Precondition { .. }) => Ok(uniform_moments(n)),
        other => other,
    }
}

fn check(condition: &'static str, value: f64, limit: f64, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(PseudoError::Precondition { condition, value, limit })
    }
}

fn add_diag(m: &mut Array2<f64>, s: f64) {
    m.diag_mut().mapv_inplace(|x| x + s);
}

fn min_eig(m: &Array2<f64>) -> Result<f64> {
    Ok(spectral_ops::min_eigenvalue(m)?)
}

fn psd_with_shift(mut m: Array2<f64>, shift: f64) -> Result<bool> {
    add_diag(&mut m, shift);
    Ok(spectral_ops::is_psd(&m, 0.0)?)
}

struct Start {
    report: PreconditionReport,
    spectral_ok: bool,
    corrected: MomentMatrix,
    sphere: SphereCorrectionReport,
}

fn delta_sum(n: usize, r: &SphereCorrectionReport) -> f64 {
    let nf = n as f64;
    nf * r.delta1 + nf.powf(1.5) * r.delta2_prime + nf * nf * r.delta2
}

fn deg3_start(a: &DenseTensor, lambda: f64, measure: bool) -> Result<Start> {
    let n = a.dim();
    let nf = n as f64;
    let sym_a = a.symmetrize();
    let correlation = 6.0 * a.dot(&sym_a)? / nf.powi(3);
    let eps = 1.0 / lambda;
    let shift = 2.0 * lambda * lambda;
    let orbit = identity_orbit(n);

    let mut nsum = Array2::<f64>::zeros((n * n, n * n));
    let mut trace = 0.0_f64;
    let mut spectral_ok = true;
    let mut spectral_min = f64::INFINITY;
    for pi in Permutation::all(3) {
        let ap = a.permute(&pi)?;
        let u = ap.matrix(1);
        let nm = u.t().dot(&u);
        trace = trace.max((&orbit * &nm).sum().abs() / (3.0 * lambda * lambda * nf * nf));
        let r = reduce_pairs(n, &symmetry::sigma_pair_sum(&nm)?);
        if measure {
            spectral_min = spectral_min.min(min_eig(&r)?);
            spectral_ok &= spectral_min >= -shift;
        } else if spectral_ok {
            spectral_ok = psd_with_shift(r, shift)?;
        }
        nsum += &nm;
    }
    let quartic = &orbit / (nf * nf) + sym_project(&nsum)? * (3.0 * eps * eps / (6.0 * nf * nf));
    let cubic_scale = eps / nf.powf(1.5);
    let low = 1.0 / nf;
    let pe0 = MomentMatrix::from_monomial_fn(n, |idx| match *idx {
        [] => 1.0,
        [i, j] if i == j => low,
        [_, _, _] => cubic_scale * sym_a.get(idx),
        [i, j, k, l] => quartic[[i * n + j, k * n + l]],
        _ => 0.0,
    });
    let (corrected, sphere) = sphere_correct(&pe0)?;
    let report = PreconditionReport {
        correlation,
        spectral_shift: shift,
        spectral_min: measure.then_some(spectral_min),
        trace,
        delta_sum: delta_sum(n, &sphere),
        quartic_top_up: None,
    };
    Ok(Start { report, spectral_ok, corrected, sphere })
}

fn deg4_start(a: &DenseTensor, lambda: f64, measure: bool) -> Result<Start> {
    let n = a.dim();
    let nf = n as f64;
    let l2 = lambda * lambda;
    let sym_a = a.symmetrize();
    let correlation = 24.0 * a.dot(&sym_a)? / nf.powi(4);
    let orbit = identity_orbit(n);

    let mut trace = 0.0_f64;
    let mut spectral_ok = true;
    let mut spectral_min = f64::INFINITY;
    for pi in Permutation::all(4) {
        let ap = a.permute(&pi)?;
        let mp = ap.matrix(2);
        trace = trace.max((&orbit * &mp).sum().abs() / (3.0 * l2 * nf.powf(1.5)));
        let half = (&mp + &mp.t()) * 0.5;
        if measure {
            spectral_min = spectral_min.min(min_eig(&half)?);
            spectral_ok &= spectral_min >= -l2;
        } else if spectral_ok {
            spectral_ok = psd_with_shift(half, l2)?;
        }
    }

    let mut base = uniform_matrix(n).into_matrix();
    let uq = &orbit / (nf * nf + 2.0 * nf);
    {
        let mut q = base.slice_mut(ndarray::s![1 + n.., 1 + n..]);
        q.scaled_add(1.0 / (nf * nf * l2), &sym_a.matrix(2));
    }
    let with_top_up = |beta: f64| -> Result<MomentMatrix> {
        let mut m = base.clone();
        m.slice_mut(ndarray::s![1 + n.., 1 + n..]).scaled_add(beta, &uq);
        Ok(MomentMatrix::from_matrix(n, m)?)
    };
    let psd = |m: &MomentMatrix| -> Result<bool> { Ok(spectral_ops::is_psd(&m.reduced(), 1e-12)?) };
    let c_raw = with_top_up(0.0)?.norm4();
    let beta0 = (1.0 - c_raw).max(0.0);
    let beta = if psd(&with_top_up(beta0)?)? {
        beta0
    } else {
        let mut lo = beta0;
        let mut hi = beta0 + 1e-3;
        while !psd(&with_top_up(hi)?)? {
            lo = hi;
            hi = beta0 + 2.0 * (hi - beta0);
            if hi > crate::T_CAP {
                return Err(PseudoError::Bracket { cap: crate::T_CAP });
            }
        }
        while hi - lo > 1e-9 * hi {
            let mid = 0.5 * (lo + hi);
            if psd(&with_top_up(mid)?)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let (corrected, sphere) = sphere_correct(&with_top_up(beta)?)?;
    let report = PreconditionReport {
        correlation,
        spectral_shift: l2,
        spectral_min: measure.then_some(spectral_min),
        trace,
        delta_sum: delta_sum(n, &sphere),
        quartic_top_up: Some(beta),
    };
    Ok(Start { report, spectral_ok, corrected, sphere })
}

fn finish(start: Start, cfg: &LbConfig, provenance: Provenance, params: ConstructionParams) -> Result<PseudoExpectation> {
    let r = &start.report;
    check("correlation", r.correlation, cfg.correlation_min, r.correlation >= cfg.correlation_min)?;
    check("spectral", r.spectral_min.unwrap_or(f64::NAN), -r.spectral_shift, start.spectral_ok)?;
    check("trace", r.trace, cfg.trace_max, r.trace <= cfg.trace_max)?;
    check("delta", r.delta_sum, cfg.delta_max, r.delta_sum <= cfg.delta_max)?;
    let lm = lambda_min_functional(&start.corrected)?;
    let mixing = mixing_weight(lm);
    let mut sphere = start.sphere;
    sphere.lambda_min = Some(lm);
    let moment = mix_unchecked(&start.corrected, mixing)?;
    Ok(PseudoExpectation {
        moment,
        provenance,
        params: ConstructionParams { mixing: Some(mixing), quartic_top_up: start.report.quartic_top_up, ..params },
        on_sphere: true,
        sphere: Some(sphere),
        preconditions: Some(start.report),
    })
}

fn validate(a: &DenseTensor, order: usize, lambda: f64) -> Result<()> {
    if a.order() != order {
        return Err(PseudoError::Order { expected: order, got: a.order() });
    }
    check("lambda", lambda, 0.0, lambda > 0.0 && lambda.is_finite())
}

/// Pseudo-moments for a random cubic form `A`: planted degree-3 moments `(1/λn^{3/2})·ΣA^π`,
/// degree 4 from the symmetric Schur extension of each permutation, then sphere correction and
/// the least uniform mixing that restores positivity.
pub fn build_lb_deg3(a: &DenseTensor, lambda: f64, cfg: &LbConfig) -> Result<PseudoExpectation> {
    validate(a, 3, lambda)?;
    let start = deg3_start(a, lambda, false)?;
    let params = ConstructionParams { epsilon: Some(1.0 / lambda), lambda: Some(lambda), ..Default::default() };
    finish(start, cfg, Provenance::LbDeg3, params)
}

/// Pseudo-moments for a random quartic form: `E^μ + ΣA^π/(24n²λ²)` plus the least uniform
/// quartic mass making it PSD, then sphere correction and mixing.
pub fn build_lb_deg4(a: &DenseTensor, lambda: f64, cfg: &LbConfig) -> Result<PseudoExpectation> {
    validate(a, 4, lambda)?;
    let start = deg4_start(a, lambda, false)?;
    let params =
        ConstructionParams { epsilon: Some(1.0 / (lambda * lambda)), lambda: Some(lambda), ..Default::default() };
    finish(start, cfg, Provenance::LbDeg4, params)
}

fn quantile(mut xs: Vec<f64>, q: f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let i = ((xs.len() as f64 - 1.0) * q).round() as usize;
    xs[i.min(xs.len() - 1)]
}

fn calibrate_one(
    order: usize,
    sizes: &[usize],
    trials: usize,
    seed: u64,
    lambda_of: fn(usize, f64) -> f64,
    start: fn(&DenseTensor, f64, bool) -> Result<Start>,
) -> Result<LbConfig> {
    let draw = |n: usize, t: usize| {
        let mut r = rng::stream(rng::derive_seed(seed, &[order as u64, n as u64, t as u64]), rng::ids::NOISE);
        DenseTensor::from_vec(order, n, rng::gaussian_vec(&mut r, n.pow(order as u32)))
    };
    // Spectral statistic first: the λ that makes each draw pass, as a multiple of the default scale.
    let mut needed = Vec::new();
    for &n in sizes {
        for t in 0..trials {
            let s = start(&draw(n, t)?, lambda_of(n, 1.0), true)?;
            let r = &s.report;
            let min = r.spectral_min.unwrap_or(0.0).min(0.0);
            // shift = k·λ² for λ = lambda_of(n, 1): k = shift / λ².
            let unit = lambda_of(n, 1.0).powi(2);
            let k = r.spectral_shift / unit;
            let lambda_needed = (-min / k).sqrt();
            needed.push(if order == 3 { lambda_needed / lambda_of(n, 1.0) } else { lambda_needed.powi(2) / n as f64 });
        }
    }
    let lambda_constant = needed.iter().copied().fold(0.0, f64::max) * 1.1;
    let (mut corr, mut trace, mut delta) = (Vec::new(), Vec::new(), Vec::new());
    for &n in sizes {
        for t in 0..trials {
            let s = start(&draw(n, t)?, lambda_of(n, lambda_constant), false)?;
            corr.push(s.report.correlation);
            trace.push(s.report.trace);
            delta.push(s.report.delta_sum);
        }
    }
    Ok(LbConfig {
        lambda_constant,
        correlation_min: quantile(corr, 0.01) * 0.8,
        trace_max: quantile(trace, 0.99) * 1.25,
        delta_max: quantile(delta, 0.99) * 1.25,
    })
}

/// Derives the precondition limits from Gaussian draws: `λ` constants from the largest spectral
/// requirement seen (with 10% margin), upper limits from 99th percentiles (+25%), the correlation
/// floor from the 1st percentile (−20%).
pub fn calibrate_preconditions(
    sizes3: &[usize],
    sizes4: &[usize],
    trials: usize,
    seed: u64,
) -> Result<PreconditionTable> {
    let deg3 = calibrate_one(3, sizes3, trials, seed, deg3_lambda, deg3_start)?;
    let deg4 = calibrate_one(4, sizes4, trials, seed, deg4_lambda, deg4_start)?;
    let mut sizes: Vec<usize> = sizes3.iter().chain(sizes4).copied().collect();
    sizes.sort_unstable();
    sizes.dedup();
    Ok(PreconditionTable { trials, seed, sizes, deg3, deg4 })
}
