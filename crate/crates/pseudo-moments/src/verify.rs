use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};
use sos_moment_sdp::MomentMatrix;
use tensor_core::rng;

use crate::{PseudoExpectation, Result};

#[derive(Debug, Clone)]
pub struct VerifyTolerances {
    pub psd: f64,
    pub symmetry: f64,
    pub sphere: f64,
    pub normalization: f64,
    /// Relative slack for the sampled inequalities.
    pub inequality: f64,
    /// Random directions and matrices drawn per inequality.
    pub samples: usize,
    pub seed: u64,
    /// Extra directions for the cubic-to-linear inequality (e.g. a planted vector).
    pub directions: Vec<Array1<f64>>,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self {
            psd: 1e-8,
            symmetry: 1e-8,
            sphere: 1e-8,
            normalization: 1e-8,
            inequality: 1e-9,
            samples: 8,
            seed: 0,
            directions: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Normalization,
    Psd,
    Symmetry,
    Sphere,
    CauchySchwarz,
    CubicLinear,
    OperatorNorm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pe_one: f64,
    pub min_eigenvalue: f64,
    pub symmetry_defect: f64,
    pub kernel_residual: f64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed(&self, check: Check) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }
}

fn cubic_along(m: &MomentMatrix, v: &Array1<f64>) -> f64 {
    let n = m.n();
    let cub = m.cubic_block();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                s += v[i] * v[j] * v[k] * cub[[i, j * n + k]];
            }
        }
    }
    s
}

fn op_norm(m: &Array2<f64>) -> Result<f64> {
    let gram = m.t().dot(m);
    let top = spectral_ops::dense_eig_oracle(&gram)?.top().0;
    Ok(top.max(0.0).sqrt())
}

/// Checks normalization, positivity, symmetry, the sphere constraint (when claimed) and three
/// sampled consequences of positivity; every failure is listed rather than returned as an error.
pub fn verify_pe(pe: &PseudoExpectation, tol: &VerifyTolerances) -> Result<VerifyReport> {
    let m = &pe.moment;
    let n = m.n();
    let mut violations = Vec::new();
    let mut flag = |check, value: f64, limit: f64, ok: bool, detail: String| {
        if !ok {
            violations.push(Violation { check, value, limit, detail });
        }
    };

    let pe_one = m.pe_one();
    flag(Check::Normalization, pe_one, 1.0, (pe_one - 1.0).abs() <= tol.normalization, "pE 1".into());
    let min_eigenvalue = m.min_eigenvalue()?;
    flag(Check::Psd, min_eigenvalue, -tol.psd, min_eigenvalue >= -tol.psd, "reduced moment matrix".into());
    let symmetry_defect = m.symmetry_defect();
    flag(Check::Symmetry, symmetry_defect, tol.symmetry, symmetry_defect <= tol.symmetry, "monomial entries".into());
    let kernel_residual = m.kernel_residual();
    if pe.on_sphere {
        flag(Check::Sphere, kernel_residual, tol.sphere, kernel_residual <= tol.sphere, "‖M w‖".into());
    }

    let mut rng = rng::stream(tol.seed, rng::ids::PROBE);
    let slack = |x: f64| tol.inequality * x.abs().max(1.0);

    // pE⟨x, y⟩ ≤ √(pE‖x‖²)·‖y‖.
    let mean = m.first_moments();
    let norm2 = m.second_moments().diag().sum();
    let mut ys: Vec<Array1<f64>> = (0..tol.samples).map(|_| rng::unit_vector(&mut rng, n)).collect();
    let mn = mean.dot(&mean).sqrt();
    if mn > 0.0 {
        ys.push(&mean / mn);
    }
    for y in &ys {
        let lhs = mean.dot(y);
        let rhs = norm2.max(0.0).sqrt() * y.dot(y).sqrt();
        flag(Check::CauchySchwarz, lhs, rhs, lhs <= rhs + slack(rhs), format!("y·pE x with ‖y‖ = {:.3}", y.dot(y).sqrt()));
    }

    // On the sphere, pE⟨x,v⟩ ≥ 2·pE⟨x,v⟩³ − 1 for unit v.
    if pe.on_sphere {
        let mut vs: Vec<Array1<f64>> = tol.directions.iter().map(|d| d / d.dot(d).sqrt()).collect();
        if mn > 0.0 {
            vs.push(&mean / mn);
        }
        vs.extend((0..tol.samples).map(|_| rng::unit_vector(&mut rng, n)));
        for v in &vs {
            let a = mean.dot(v);
            let b = cubic_along(m, v);
            let limit = 2.0 * b - 1.0;
            flag(Check::CubicLinear, a, limit, a >= limit - slack(limit), format!("pE⟨x,v⟩³ = {b:.6}"));
        }
    }

    // pE⟨x⊗x, Mx⟩ ≤ ‖M‖·(pE‖x‖⁴)^{3/4}.
    let cubic_t = m.cubic_block().t().to_owned();
    let norm4 = m.norm4().max(0.0);
    let mut mats: Vec<Array2<f64>> = (0..tol.samples)
        .map(|_| Array2::from_shape_vec((n * n, n), rng::gaussian_vec(&mut rng, n * n * n)).expect("n³ draws"))
        .collect();
    let cn = op_norm(&cubic_t)?;
    if cn > 0.0 {
        mats.push(&cubic_t / cn);
    }
    for mm in &mats {
        let lhs: f64 = mm.iter().zip(cubic_t.iter()).map(|(a, b)| a * b).sum();
        let rhs = op_norm(mm)? * norm4.powf(0.75);
        flag(Check::OperatorNorm, lhs, rhs, lhs <= rhs + slack(rhs), "sampled M".into());
    }

    Ok(VerifyReport { pe_one, min_eigenvalue, symmetry_defect, kernel_residual, violations })
}
