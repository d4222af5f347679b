use ndarray::{Array1, Array2};
use ndarray_linalg::{Cholesky, Eigh, EigValsh, UPLO};

use crate::{Result, SpectralError};

pub const DEFAULT_DENSE_CAP: usize = 2000;

/// Full symmetric eigendecomposition, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Array1<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: Array2<f64>,
}

impl Spectrum {
    pub fn top(&self) -> (f64, Array1<f64>) {
        (self.values[0], self.vectors.column(0).to_owned())
    }

    /// `V diag(values) Vᵀ`.
    pub fn reconstruct(&self) -> Array2<f64> {
        let scaled = &self.vectors * &self.values.view().insert_axis(ndarray::Axis(0));
        scaled.dot(&self.vectors.t())
    }
}

fn check(m: &Array2<f64>, cap: usize) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(SpectralError::NotSquare(m.nrows(), m.ncols()));
    }
    if m.nrows() > cap {
        return Err(SpectralError::TooLarge { dim: m.nrows(), cap });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(SpectralError::NonFinite);
    }
    let scale = m.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let asym = m.iter().zip(m.t().iter()).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
    if asym > 1e-9 * scale.max(1e-300) {
        return Err(SpectralError::NotSymmetric);
    }
    Ok(())
}

pub fn dense_eig_oracle(m: &Array2<f64>) -> Result<Spectrum> {
    dense_eig_oracle_capped(m, DEFAULT_DENSE_CAP)
}

/// Eigenvectors carry a positive first entry of non-negligible size; equal eigenvalues
/// are ordered by lexicographically larger eigenvector.
pub fn dense_eig_oracle_capped(m: &Array2<f64>, cap: usize) -> Result<Spectrum> {
    check(m, cap)?;
    let d = m.nrows();
    if d == 0 {
        return Ok(Spectrum { values: Array1::zeros(0), vectors: Array2::zeros((0, 0)) });
    }
    let sym = (m + &m.t()) * 0.5;
    let (vals, vecs) = sym.eigh(UPLO::Lower).map_err(|e| SpectralError::Lapack(e.to_string()))?;
    let mut cols: Vec<(f64, Array1<f64>)> = (0..d)
        .map(|j| {
            let mut v = vecs.column(j).to_owned();
            if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-12) {
                if first < 0.0 {
                    v.mapv_inplace(|x| -x);
                }
            }
            (vals[j], v)
        })
        .collect();
    let scale = vals.iter().fold(0.0_f64, |a, x| a.max(x.abs())).max(1e-300);
    let tie = 1e-12 * scale;
    cols.sort_by(|a, b| {
        if (a.0 - b.0).abs() <= tie {
            lex_cmp(&b.1, &a.1)
        } else {
            b.0.partial_cmp(&a.0).expect("finite eigenvalues")
        }
    });
    let mut values = Array1::zeros(d);
    let mut vectors = Array2::zeros((d, d));
    for (j, (val, vec)) in cols.into_iter().enumerate() {
        values[j] = val;
        vectors.column_mut(j).assign(&vec);
    }
    Ok(Spectrum { values, vectors })
}

fn lex_cmp(a: &Array1<f64>, b: &Array1<f64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x - y).abs() > 1e-12 {
            return x.partial_cmp(y).expect("finite");
        }
    }
    std::cmp::Ordering::Equal
}

/// Smallest eigenvalue of a symmetric matrix (values only).
pub fn min_eigenvalue(m: &Array2<f64>) -> Result<f64> {
    check(m, usize::MAX)?;
    if m.nrows() == 0 {
        return Ok(f64::INFINITY);
    }
    let sym = (m + &m.t()) * 0.5;
    let vals = sym.eigvalsh(UPLO::Lower).map_err(|e| SpectralError::Lapack(e.to_string()))?;
    Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Whether `m + tol·Id` admits a Cholesky factorization, i.e. `λ_min(m) > -tol` up to rounding.
pub fn is_psd(m: &Array2<f64>, tol: f64) -> Result<bool> {
    check(m, usize::MAX)?;
    let mut shifted = (m + &m.t()) * 0.5;
    for i in 0..shifted.nrows() {
        shifted[[i, i]] += tol;
    }
    Ok(shifted.cholesky(UPLO::Lower).is_ok())
}
