use std::time::{Duration, Instant};

use ndarray::{Array1, Array2, ArrayView1, OwnedRepr};
use ndarray_linalg::{CholeskyFactorized, FactorizeC, SolveC, UPLO};
use spectral_ops::dense_eig_oracle;
use tensor_core::DenseTensor;

use crate::{MomentMatrix, MonomialBasis, ReducedBasis, Result, SdpError};

/// `−τ⟨v,x⟩³` added to the objective.
#[derive(Debug, Clone)]
pub struct RankOneShift {
    pub tau: f64,
    pub v: Array1<f64>,
}

#[derive(Debug, Clone)]
pub struct SdpOptions {
    /// Absolute target for both residuals.
    pub tol: f64,
    pub max_iter: usize,
    pub rho: f64,
    pub max_n: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iter: 50_000, rho: 1.0, max_n: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub moment: MomentMatrix,
    /// `pE T(x)` (including the shift, if any).
    pub objective: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub converged: bool,
    pub wall_time: Duration,
}

/// Linear map from moments `y` (one per monomial of degree ≤ 4) to the reduced moment matrix.
pub struct MomentMap {
    basis: MonomialBasis,
    reduced: ReducedBasis,
    /// Per upper-triangular pair `(a, b)`: monomial index and coefficient `s_a s_b`.
    pairs: Vec<(usize, usize, usize, f64)>,
    /// Diagonal of `AᵀA` over ordered pairs.
    weights: Array1<f64>,
}

pub fn moment_map(n: usize) -> MomentMap {
    let basis = MonomialBasis::new(n, 4);
    let reduced = ReducedBasis::new(n);
    let r = reduced.len();
    let mut pairs = Vec::with_capacity(r * (r + 1) / 2);
    let mut weights = Array1::zeros(basis.len());
    let mut idx = Vec::with_capacity(4);
    for a in 0..r {
        for b in a..r {
            idx.clear();
            idx.extend_from_slice(reduced.element(a));
            idx.extend_from_slice(reduced.element(b));
            let m = basis.of_indices(&idx);
            let s = reduced.scale(a) * reduced.scale(b);
            pairs.push((a, b, m, s));
            weights[m] += if a == b { s * s } else { 2.0 * s * s };
        }
    }
    MomentMap { basis, reduced, pairs, weights }
}

impl MomentMap {
    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn reduced_dim(&self) -> usize {
        self.reduced.len()
    }

    pub fn apply(&self, y: &Array1<f64>) -> Array2<f64> {
        let r = self.reduced.len();
        let mut out = Array2::zeros((r, r));
        for &(a, b, m, s) in &self.pairs {
            let v = s * y[m];
            out[[a, b]] = v;
            out[[b, a]] = v;
        }
        out
    }

    /// `Aᵀ X` for symmetric `X`.
    pub fn adjoint(&self, x: &Array2<f64>) -> Array1<f64> {
        let mut out = Array1::zeros(self.basis.len());
        for &(a, b, m, s) in &self.pairs {
            let k = if a == b { 1.0 } else { 2.0 };
            out[m] += k * s * x[[a, b]];
        }
        out
    }

    /// Full tuple-indexed moment matrix.
    pub fn moment_matrix(&self, y: &Array1<f64>) -> MomentMatrix {
        MomentMatrix::from_monomial_fn(self.basis.n(), |idx| y[self.basis.of_indices(idx)])
    }

    /// Objective coefficients: `c_m = Σ_{α ↦ m} T_α`.
    pub fn objective(&self, t: &DenseTensor) -> Array1<f64> {
        let mut c = Array1::zeros(self.basis.len());
        for (off, &val) in t.as_slice().iter().enumerate() {
            c[self.basis.of_indices(&t.multi_index(off))] += val;
        }
        c
    }
}

/// Affine constraints `E y = f`: `pE 1 = 1` and `pE x^m (‖x‖² − 1) = 0` for `deg m ≤ 2`.
struct Affine {
    rows: Vec<Vec<(usize, f64)>>,
    f: Array1<f64>,
    inv_w: Array1<f64>,
    chol: CholeskyFactorized<OwnedRepr<f64>>,
}

impl Affine {
    fn new(map: &MomentMap) -> Result<Self> {
        let basis = &map.basis;
        let n = basis.n();
        let mut rows = vec![vec![(0, 1.0)]];
        let mut f = vec![1.0];
        for m in (0..basis.len()).filter(|&m| basis.degree(m) <= 2) {
            let mut row = vec![(m, -1.0)];
            row.extend((0..n).map(|k| (basis.times_square(m, k).expect("degree ≤ 4"), 1.0)));
            rows.push(row);
            f.push(0.0);
        }
        let inv_w = map.weights.mapv(|w| 1.0 / w);
        let p = rows.len();
        let mut k = Array2::<f64>::zeros((p, p));
        // Rows are sparse, so accumulate E W⁻¹ Eᵀ through a dense scatter of each row.
        let mut dense = vec![0.0; basis.len()];
        for i in 0..p {
            for &(m, e) in &rows[i] {
                dense[m] += e * inv_w[m];
            }
            for j in 0..p {
                k[[i, j]] = rows[j].iter().map(|&(m, e)| e * dense[m]).sum();
            }
            for &(m, _) in &rows[i] {
                dense[m] = 0.0;
            }
        }
        let chol = k.factorizec(UPLO::Lower).map_err(|e| SdpError::Lapack(e.to_string()))?;
        Ok(Self { rows, f: Array1::from(f), inv_w, chol })
    }

    /// Projection of `h` onto `{E y = f}` in the `W`-weighted norm.
    fn project(&self, h: &mut Array1<f64>) -> Result<()> {
        let resid: Array1<f64> =
            self.rows.iter().zip(self.f.iter()).map(|(row, f)| row.iter().map(|&(m, e)| e * h[m]).sum::<f64>() - f).collect();
        let lam = self.chol.solvec(&resid).map_err(|e| SdpError::Lapack(e.to_string()))?;
        for (row, l) in self.rows.iter().zip(lam.iter()) {
            for &(m, e) in row {
                h[m] -= self.inv_w[m] * e * l;
            }
        }
        Ok(())
    }
}

const RHO_EVERY: usize = 10;
const RHO_FREEZE: usize = 5_000;

fn psd_projection(x: &Array2<f64>) -> Result<Array2<f64>> {
    let spec = dense_eig_oracle(x)?;
    let r = x.nrows();
    let mut out = Array2::zeros((r, r));
    for (k, &lam) in spec.values.iter().enumerate() {
        if lam <= 0.0 {
            break;
        }
        let col = spec.vectors.column(k);
        for i in 0..r {
            let ci = lam * col[i];
            for j in 0..r {
                out[[i, j]] += ci * col[j];
            }
        }
    }
    Ok(out)
}

fn frobenius(x: &Array2<f64>) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Maximizes `pE T(x)` (minus an optional `τ⟨v,x⟩³`) over degree-4 pseudo-distributions on the
/// sphere, by ADMM between the affine moment constraints and the PSD cone.
pub fn solve_moment_sdp(t: &DenseTensor, shift: Option<&RankOneShift>, opts: &SdpOptions) -> Result<SdpSolution> {
    if t.order() != 3 {
        return Err(SdpError::Order { expected: 3, got: t.order() });
    }
    let n = t.dim();
    if n > opts.max_n {
        return Err(SdpError::TooLarge { n, cap: opts.max_n });
    }
    let start = Instant::now();
    let objective_tensor = match shift {
        Some(s) => {
            if s.v.len() != n {
                return Err(SdpError::Shape { expected: n, got: s.v.len() });
            }
            t.add_scaled(&DenseTensor::outer_power(s.v.view(), 3)?, -s.tau)?
        }
        None => t.clone(),
    };
    let map = moment_map(n);
    let c = map.objective(&objective_tensor);
    let affine = Affine::new(&map)?;
    let r = map.reduced_dim();

    let mut rho = opts.rho;
    let mut z = Array2::<f64>::zeros((r, r));
    let mut u = Array2::<f64>::zeros((r, r));
    let mut y = Array1::<f64>::zeros(map.basis.len());
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut h = map.adjoint(&(&z - &u)) / &map.weights + &(&c / &map.weights) / rho;
        affine.project(&mut h)?;
        y = h;
        let ay = map.apply(&y);
        let z_new = psd_projection(&(&ay + &u))?;
        let diff = &ay - &z_new;
        primal = frobenius(&diff);
        dual = rho * frobenius(&(&z_new - &z));
        u += &diff;
        z = z_new;
        if primal <= opts.tol && dual <= opts.tol {
            break;
        }
        // Residual balancing, periodic and eventually frozen so that fixed-ρ convergence applies.
        if iterations % RHO_EVERY == 0 && iterations <= RHO_FREEZE {
            if primal > 10.0 * dual {
                rho *= 2.0;
                u /= 2.0;
            } else if dual > 10.0 * primal {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }
    let converged = primal <= opts.tol && dual <= opts.tol;
    let objective = c.dot(&y);
    Ok(SdpSolution {
        moment: map.moment_matrix(&y),
        objective,
        iterations,
        primal_residual: primal,
        dual_residual: dual,
        converged,
        wall_time: start.elapsed(),
    })
}

impl SdpSolution {
    pub fn first_moments(&self) -> Array1<f64> {
        self.moment.first_moments()
    }

    /// `pE T(x)` of another cubic form under this solution.
    pub fn value_of(&self, t: &DenseTensor) -> Result<f64> {
        self.moment.cubic_value(t)
    }

    pub fn first_moment_along(&self, v: ArrayView1<f64>) -> f64 {
        self.first_moments().dot(&v)
    }
}
