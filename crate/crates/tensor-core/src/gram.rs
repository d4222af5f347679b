use ndarray::Array2;

/// `E Σ_i A_i ⊗ A_i = n·w wᵀ` for iid standard Gaussian slices, with `w = vec(Id_n)`.
pub fn expected_gram(n: usize) -> Array2<f64> {
    let mut m = Array2::zeros((n * n, n * n));
    for a in 0..n {
        for b in 0..n {
            m[[a * n + a, b * n + b]] = n as f64;
        }
    }
    m
}

/// `vec(Id_n)` in row-major order.
pub fn vec_identity(n: usize) -> ndarray::Array1<f64> {
    let mut w = ndarray::Array1::zeros(n * n);
    for a in 0..n {
        w[a * n + a] = 1.0;
    }
    w
}
