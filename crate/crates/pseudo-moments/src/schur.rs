use ndarray::{s, Array2};
use ndarray_linalg::{Cholesky, Diag, SolveTriangular, UPLO};

use crate::{sym_project, PseudoError, Result};

/// Largest scale tried before giving up on the bracket.
pub const T_CAP: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct SchurExtension {
    /// Least `t` with `t·3·sym_project(S) ⪰ S`.
    pub t: f64,
    /// The degree-4 block `t·3·sym_project(S)`.
    pub block: Array2<f64>,
    /// `S = C B⁻¹ Cᵀ`.
    pub complement: Array2<f64>,
}

fn is_psd_rel(m: &Array2<f64>) -> Result<bool> {
    let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(true);
    }
    Ok(spectral_ops::min_eigenvalue(m)? >= -1e-10 * norm)
}

/// Extends the degree ≤ 3 blocks `B` (low-degree Gram) and `C` (quadratic rows against low-degree
/// columns) by the smallest multiple of the symmetrized Schur complement that keeps the matrix PSD.
pub fn schur_extend(b: &Array2<f64>, c: &Array2<f64>) -> Result<SchurExtension> {
    if b.nrows() != b.ncols() || c.ncols() != b.nrows() {
        return Err(PseudoError::Shape { expected: format!("C with {} columns", b.nrows()), rows: c.nrows(), cols: c.ncols() });
    }
    let g = b.cholesky(UPLO::Lower).map_err(|_| PseudoError::SingularBlock)?;
    let y = g.solve_triangular(UPLO::Lower, Diag::NonUnit, &c.t().to_owned())?;
    let s_mat = y.t().dot(&y);
    let s_mat = (&s_mat + &s_mat.t()) * 0.5;
    let sym = sym_project(&s_mat)? * 3.0;
    if s_mat.iter().all(|&x| x == 0.0) {
        return Ok(SchurExtension { t: 0.0, block: Array2::zeros(s_mat.dim()), complement: s_mat });
    }
    let ok = |t: f64| is_psd_rel(&(&sym * t - &s_mat));
    let mut hi = 1.0;
    while !ok(hi)? {
        hi *= 2.0;
        if hi > T_CAP {
            return Err(PseudoError::Bracket { cap: T_CAP });
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SchurExtension { t: hi, block: sym * hi, complement: s_mat })
}

/// `[[B, Cᵀ], [C, D]]`.
pub fn extend_matrix(b: &Array2<f64>, c: &Array2<f64>, d: &Array2<f64>) -> Array2<f64> {
    let (p, q) = (b.nrows(), d.nrows());
    let mut m = Array2::zeros((p + q, p + q));
    m.slice_mut(s![..p, ..p]).assign(b);
    m.slice_mut(s![p.., ..p]).assign(c);
    m.slice_mut(s![..p, p..]).assign(&c.t());
    m.slice_mut(s![p.., p..]).assign(d);
    m
}
