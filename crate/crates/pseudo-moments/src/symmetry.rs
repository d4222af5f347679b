use ndarray::Array2;
use tensor_core::{DenseTensor, Permutation};

use crate::{PseudoError, Result};

/// The 3-cycle on the last three modes of a 4-tensor, in `permute` convention.
pub fn sigma() -> Permutation {
    Permutation::new(vec![0, 3, 1, 2]).expect("valid permutation")
}

fn side(m: &Array2<f64>) -> Result<usize> {
    let (r, c) = m.dim();
    let n = (r as f64).sqrt().round() as usize;
    if r != c || n * n != r {
        return Err(PseudoError::Shape { expected: "n²×n²".into(), rows: r, cols: c });
    }
    Ok(n)
}

fn as_tensor(m: &Array2<f64>, n: usize) -> Result<DenseTensor> {
    Ok(DenseTensor::from_vec(4, n, m.iter().copied().collect())?)
}

fn as_matrix(t: DenseTensor) -> Array2<f64> {
    let n = t.dim();
    Array2::from_shape_vec((n * n, n * n), t.into_vec()).expect("n⁴ entries")
}

/// `Π M Π`: averages over swapping the indices inside the row pair and inside the column pair.
pub fn pi_conjugate(m: &Array2<f64>) -> Result<Array2<f64>> {
    let n = side(m)?;
    Ok(Array2::from_shape_fn((n * n, n * n), |(r, c)| {
        let (a, b) = (r / n, r % n);
        let (x, y) = (c / n, c % n);
        0.25 * (m[[r, c]] + m[[b * n + a, c]] + m[[r, y * n + x]] + m[[b * n + a, y * n + x]])
    }))
}

/// Average of `π·M` over all 24 index permutations, computed as
/// `(1/3)·[½Π(N)Π + ½Π(Nᵀ)Π]` with `N = M + σ·M + σ²·M`.
pub fn sym_project(m: &Array2<f64>) -> Result<Array2<f64>> {
    let n = side(m)?;
    let t = as_tensor(m, n)?;
    let s = sigma();
    let n_sum = t.add_scaled(&t.permute(&s)?, 1.0)?.add_scaled(&t.permute(&s.compose(&s))?, 1.0)?;
    let n_mat = as_matrix(n_sum);
    let both = (&n_mat + &n_mat.t()) * 0.5;
    Ok(pi_conjugate(&both)? / 3.0)
}

/// `Id + σ·Id + σ²·Id` on `R^{n²}`; divided by `n² + 2n` it is the uniform quartic moment matrix.
pub fn identity_orbit(n: usize) -> Array2<f64> {
    let d = n * n;
    let mut m = Array2::zeros((d, d));
    for a in 0..n {
        for b in 0..n {
            m[[a * n + a, b * n + b]] += 1.0;
            m[[a * n + b, a * n + b]] += 1.0;
            m[[a * n + b, b * n + a]] += 1.0;
        }
    }
    m
}

/// Restriction of an `n²×n²` matrix to the symmetric subspace, in the orthonormal basis
/// `e_ii` and `(e_ij + e_ji)/√2` for `i < j`.
pub fn reduce_pairs(n: usize, m: &Array2<f64>) -> Array2<f64> {
    let mut basis: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n * (n + 1) / 2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i..n {
            basis.push(if i == j { vec![(i * n + i, 1.0)] } else { vec![(i * n + j, h), (j * n + i, h)] });
        }
    }
    let r = basis.len();
    let mut out = Array2::zeros((r, r));
    for a in 0..r {
        for b in a..r {
            let mut s = 0.0;
            for &(i, wi) in &basis[a] {
                for &(j, wj) in &basis[b] {
                    s += wi * wj * m[[i, j]];
                }
            }
            out[[a, b]] = s;
            out[[b, a]] = s;
        }
    }
    out
}

/// `σ·M + σ²·M`, symmetrized.
pub(crate) fn sigma_pair_sum(m: &Array2<f64>) -> Result<Array2<f64>> {
    let n = side(m)?;
    let t = as_tensor(m, n)?;
    let s = sigma();
    let sum = as_matrix(t.permute(&s)?.add_scaled(&t.permute(&s.compose(&s))?, 1.0)?);
    Ok((&sum + &sum.t()) * 0.5)
}
