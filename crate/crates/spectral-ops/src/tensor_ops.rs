use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};
use tensor_core::DenseTensor;

use crate::{LinearOperator, Result, SpectralError, Transpose};

/// `v ↦ U(Uᵀv)` for the unfolding `U` with the leading modes as rows.
pub struct GramOp<'a> {
    u: ArrayView2<'a, f64>,
}

impl<'a> GramOp<'a> {
    /// Gram operator of the unfolding with `row_modes` leading modes as rows.
    pub fn new(t: &'a DenseTensor, row_modes: usize) -> Self {
        Self { u: t.matrix(row_modes) }
    }

    pub fn unfolding(&self) -> ArrayView2<'a, f64> {
        self.u
    }
}

/// Gram operator of the squarest unfolding of an odd-order tensor (dimension `n^{(k-1)/2}`).
pub fn op_gram(t: &DenseTensor) -> Result<GramOp<'_>> {
    if t.order() % 2 == 0 {
        return Err(SpectralError::Order { expected: "odd", got: t.order() });
    }
    Ok(GramOp::new(t, t.order() / 2))
}

impl LinearOperator for GramOp<'_> {
    fn dim(&self) -> usize {
        self.u.nrows()
    }
    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let inner = self.u.t().dot(&x);
        self.u.dot(&inner)
    }
    fn is_symmetric(&self) -> bool {
        true
    }
    fn cost_hint(&self) -> f64 {
        4.0 * self.u.len() as f64
    }
}

/// `Σ_i T_i ⊗ T_i`, optionally minus its noise expectation `n·w wᵀ`, on `R^{n²}`.
///
/// `vec` is row-major, so `(Σ_i T_i ⊗ T_i) vec(V) = vec(Σ_i T_i V T_iᵀ)`. Products are formed
/// slice by slice, which avoids materializing any permuted copy of `T`.
pub struct TitiOp<'a> {
    n: usize,
    /// `T` as an n²×n matrix; rows `i·n..(i+1)·n` hold the slice `T_i`.
    flat: ArrayView2<'a, f64>,
    /// Coefficient `c` of the subtracted `c·n·w wᵀ`.
    expectation: f64,
}

pub fn op_titi(t: &DenseTensor, subtract_expectation: bool) -> Result<TitiOp<'_>> {
    if t.order() != 3 {
        return Err(SpectralError::Order { expected: "3", got: t.order() });
    }
    Ok(TitiOp { n: t.dim(), flat: t.matrix(2), expectation: if subtract_expectation { 1.0 } else { 0.0 } })
}

impl TitiOp<'_> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Subtracts `scale·n·w wᵀ`, the expectation for noise entries of variance `scale`.
    pub fn with_expectation_scale(mut self, scale: f64) -> Self {
        self.expectation = scale;
        self
    }

    pub fn expectation_scale(&self) -> f64 {
        self.expectation
    }

    fn slice(&self, i: usize) -> ArrayView2<'_, f64> {
        self.flat.slice(s![i * self.n..(i + 1) * self.n, ..])
    }

    fn subtract_expectation(&self, x: ArrayView1<f64>, out: &mut Array2<f64>) {
        if self.expectation != 0.0 {
            let n = self.n;
            let trace: f64 = (0..n).map(|a| x[a * n + a]).sum();
            for a in 0..n {
                out[[a, a]] -= self.expectation * n as f64 * trace;
            }
        }
    }
}

impl LinearOperator for TitiOp<'_> {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let n = self.n;
        let v = x.into_shape_with_order((n, n)).expect("n² vector");
        // Rows i·n..(i+1)·n of `tv` hold T_i V.
        let tv = self.flat.dot(&v);
        let mut r = Array2::zeros((n, n));
        for i in 0..n {
            general_mat_mul(1.0, &tv.slice(s![i * n..(i + 1) * n, ..]), &self.slice(i).t(), 1.0, &mut r);
        }
        self.subtract_expectation(x, &mut r);
        r.into_shape_with_order(n * n).expect("contiguous")
    }

    fn is_symmetric(&self) -> bool {
        false
    }

    fn cost_hint(&self) -> f64 {
        4.0 * (self.n as f64).powi(4)
    }
}

impl Transpose for TitiOp<'_> {
    fn apply_transpose(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let n = self.n;
        let v = x.into_shape_with_order((n, n)).expect("n² vector");
        // Σ_i T_iᵀ V T_i
        let mut vt = Array2::zeros((n, n));
        let mut r = Array2::zeros((n, n));
        for i in 0..n {
            let ti = self.slice(i);
            general_mat_mul(1.0, &v, &ti, 0.0, &mut vt);
            general_mat_mul(1.0, &ti.t(), &vt, 1.0, &mut r);
        }
        self.subtract_expectation(x, &mut r);
        r.into_shape_with_order(n * n).expect("contiguous")
    }
}
