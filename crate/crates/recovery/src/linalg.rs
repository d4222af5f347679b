use ndarray::{Array1, Array2, ArrayView2};
use ndarray_linalg::QR;
use spectral_ops::dense_eig_oracle;
use tensor_core::rng::gaussian_vec;

use crate::Result;

/// Top left singular vector of `w`, via the eigendecomposition of `w wᵀ`.
pub fn top_left_singular(w: ArrayView2<f64>) -> Result<Array1<f64>> {
    let g = w.dot(&w.t());
    let g = (&g + &g.t()) * 0.5;
    Ok(dense_eig_oracle(&g)?.top().1)
}

/// Orthogonal factor of a Gaussian matrix.
pub fn random_orthogonal(n: usize, rng: &mut impl rand::Rng) -> Array2<f64> {
    let g = Array2::from_shape_vec((n, n), gaussian_vec(rng, n * n)).expect("square");
    let (q, _) = g.qr().expect("Gaussian matrices have full rank almost surely");
    q
}

pub(crate) fn normalize(v: Array1<f64>) -> Array1<f64> {
    let norm = v.dot(&v).sqrt();
    if norm > 0.0 {
        v / norm
    } else {
        v
    }
}
