use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Cholesky, Diag, Eigh, SolveTriangular, UPLO};
use sos_moment_sdp::{MomentMatrix, ReducedBasis};

use crate::{uniform_matrix, ConstructionParams, Provenance, PseudoError, PseudoExpectation, Result};

/// `H A H` with `H` the reflection taking `w/‖w‖` to `e₀`, with the first row and column dropped.
fn restrict(a: &Array2<f64>, u: &Array1<f64>) -> Array2<f64> {
    let au = a.dot(u);
    let uau = u.dot(&au);
    let r = a.nrows();
    let mut out = a.clone();
    for i in 0..r {
        for j in 0..r {
            out[[i, j]] += -2.0 * u[i] * au[j] - 2.0 * au[i] * u[j] + 4.0 * uau * u[i] * u[j];
        }
    }
    out.slice(s![1.., 1..]).to_owned()
}

fn reflector(n: usize) -> Array1<f64> {
    let basis = ReducedBasis::new(n);
    let mut w = Array1::<f64>::zeros(basis.len());
    w[0] = -1.0;
    for a in 0..basis.len() {
        if let [i, j] = basis.element(a) {
            if i == j {
                w[a] = 1.0;
            }
        }
    }
    w /= w.dot(&w).sqrt();
    w[0] -= 1.0;
    let norm = w.dot(&w).sqrt();
    w / norm
}

/// `min_p L p² / E^μ p²` over polynomials of degree ≤ 2 orthogonal to `‖x‖² − 1`.
pub fn lambda_min_functional(l: &MomentMatrix) -> Result<f64> {
    let n = l.n();
    let u = reflector(n);
    let a = restrict(&l.reduced(), &u);
    let b = restrict(&uniform_matrix(n).reduced(), &u);
    let g = b.cholesky(UPLO::Lower).map_err(|_| PseudoError::SingularBlock)?;
    let x = g.solve_triangular(UPLO::Lower, Diag::NonUnit, &a)?;
    let c = g.solve_triangular(UPLO::Lower, Diag::NonUnit, &x.t().to_owned())?;
    let c = (&c + &c.t()) * 0.5;
    let (vals, _) = c.eigh(UPLO::Lower)?;
    Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Smallest admissible mixing weight for a functional with the given `λ_min`, plus a little slack.
pub fn mixing_weight(lambda_min: f64) -> f64 {
    (-lambda_min).max(0.0) + 1e-9
}

pub(crate) fn mix_unchecked(l: &MomentMatrix, epsilon: f64) -> Result<MomentMatrix> {
    let u = uniform_matrix(l.n());
    let m = (l.matrix() + &(u.matrix() * epsilon)) / (1.0 + epsilon);
    Ok(MomentMatrix::from_matrix(l.n(), m)?)
}

/// `(L + ε E^μ)/(1 + ε)`, refused when `ε < −λ_min(L)`.
pub fn mix_uniform(l: &MomentMatrix, epsilon: f64) -> Result<PseudoExpectation> {
    let lm = lambda_min_functional(l)?;
    if epsilon < -lm - 1e-12 {
        return Err(PseudoError::MixingTooSmall { epsilon, needed: -lm });
    }
    let params = ConstructionParams { mixing: Some(epsilon), ..Default::default() };
    Ok(PseudoExpectation::new(mix_unchecked(l, epsilon)?, Provenance::Custom, params, true))
}
