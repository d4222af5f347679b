use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::{Permutation, Result, TensorError};

/// Largest number of entries a tensor may hold unless a caller raises the cap.
pub const DEFAULT_MAX_ENTRIES: usize = 200_000_000;

/// Order-k tensor with all modes of the same size, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    order: usize,
    dim: usize,
    data: Vec<f64>,
}

pub(crate) fn checked_len(order: usize, dim: usize, cap: usize) -> Result<usize> {
    if order == 0 || dim == 0 {
        return Err(TensorError::InvalidDimensions(format!(
            "order {order} and dimension {dim} must both be positive"
        )));
    }
    let mut len: u128 = 1;
    for _ in 0..order {
        len = len.saturating_mul(dim as u128);
        if len > cap as u128 {
            return Err(TensorError::Capacity { requested: len, cap });
        }
    }
    Ok(len as usize)
}

impl DenseTensor {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        let len = checked_len(order, dim, DEFAULT_MAX_ENTRIES)?;
        Ok(Self { order, dim, data: vec![0.0; len] })
    }

    pub fn from_vec(order: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        let len = checked_len(order, dim, usize::MAX)?;
        if data.len() != len {
            return Err(TensorError::Length { expected: len, got: data.len() });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(TensorError::NonFinite(pos));
        }
        Ok(Self { order, dim, data })
    }

    /// Builds a tensor entry by entry from its multi-index.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = checked_len(order, dim, DEFAULT_MAX_ENTRIES)?;
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; order];
        for _ in 0..len {
            data.push(f(&idx));
            advance(&mut idx, dim);
        }
        Self::from_vec(order, dim, data)
    }

    /// `v^{⊗k}`.
    pub fn outer_power(v: ArrayView1<f64>, order: usize) -> Result<Self> {
        let n = v.len();
        let len = checked_len(order, n, DEFAULT_MAX_ENTRIES)?;
        let mut data = vec![1.0; 1];
        data.reserve(len);
        for _ in 0..order {
            let mut next = Vec::with_capacity(data.len() * n);
            for &a in &data {
                next.extend(v.iter().map(|&b| a * b));
            }
            data = next;
        }
        Self::from_vec(order, n, data)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn multi_index(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for slot in idx.iter_mut().rev() {
            *slot = offset % self.dim;
            offset /= self.dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Entrywise inner product `<self, other>`.
    pub fn dot(&self, other: &DenseTensor) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn scaled(&self, alpha: f64) -> DenseTensor {
        let data = self.data.iter().map(|x| alpha * x).collect();
        DenseTensor { order: self.order, dim: self.dim, data }
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &DenseTensor, alpha: f64) -> Result<DenseTensor> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        Ok(DenseTensor { order: self.order, dim: self.dim, data })
    }

    fn check_same_shape(&self, other: &DenseTensor) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(TensorError::InvalidDimensions(format!(
                "shapes ({}, {}) and ({}, {}) differ",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }

    /// Zero-copy matrix view with the first `row_modes` modes as rows.
    pub fn matrix(&self, row_modes: usize) -> ArrayView2<'_, f64> {
        assert!(row_modes <= self.order, "row_modes exceeds order");
        let rows = self.dim.pow(row_modes as u32);
        let cols = self.data.len() / rows;
        ArrayView2::from_shape((rows, cols), &self.data).expect("row-major layout")
    }

    /// The n×n slice `T[i, :, :]` of an order-3 tensor.
    pub fn slice(&self, i: usize) -> Result<Array2<f64>> {
        if self.order != 3 {
            return Err(TensorError::InvalidDimensions(format!(
                "slices need order 3, got {}",
                self.order
            )));
        }
        if i >= self.dim {
            return Err(TensorError::IndexOutOfRange { index: i, dim: self.dim });
        }
        let n = self.dim;
        let block = &self.data[i * n * n..(i + 1) * n * n];
        Ok(ArrayView2::from_shape((n, n), block).expect("slice layout").to_owned())
    }

    /// `T(x) = <x^{⊗k}, T>`, contracting the last mode first.
    pub fn eval_poly(&self, x: ArrayView1<f64>) -> Result<f64> {
        if x.len() != self.dim {
            return Err(TensorError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let mut cur = self.contract_last(x);
        while cur.len() > 1 {
            let rows = cur.len() / self.dim;
            let m = cur.into_shape_with_order((rows, self.dim)).expect("contiguous");
            cur = m.dot(&x);
        }
        Ok(cur[0])
    }

    /// Contracts the last mode against `x`, returning the flattened order-(k-1) result.
    pub fn contract_last(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.matrix(self.order - 1).dot(&x)
    }

    /// Multiplies mode `mode` by `m`: `T'[.., a, ..] = Σ_l m[a, l] T[.., l, ..]`.
    pub fn mode_product(&self, mode: usize, m: ArrayView2<f64>) -> Result<DenseTensor> {
        if mode >= self.order {
            return Err(TensorError::InvalidSplit(format!("mode {mode} >= order {}", self.order)));
        }
        if m.dim() != (self.dim, self.dim) {
            return Err(TensorError::DimensionMismatch { expected: self.dim, got: m.nrows() });
        }
        let n = self.dim;
        let outer = n.pow(mode as u32);
        let inner = self.data.len() / (outer * n);
        let src = ndarray::ArrayView3::from_shape((outer, n, inner), &self.data).expect("layout");
        let mut out = ndarray::Array3::<f64>::zeros((outer, n, inner));
        for (blk, mut dst) in src.axis_iter(Axis(0)).zip(out.axis_iter_mut(Axis(0))) {
            ndarray::linalg::general_mat_mul(1.0, &m, &blk, 0.0, &mut dst);
        }
        let data = out.into_raw_vec_and_offset().0;
        DenseTensor::from_vec(self.order, n, data)
    }

    /// Applies the same matrix to every mode: `(m ⊗ ... ⊗ m) T`.
    pub fn multilinear(&self, m: ArrayView2<f64>) -> Result<DenseTensor> {
        let mut out = self.clone();
        for mode in 0..self.order {
            out = out.mode_product(mode, m)?;
        }
        Ok(out)
    }

    /// `T^π[α] = T[α_{π(0)}, ..., α_{π(k-1)}]`.
    pub fn permute(&self, pi: &Permutation) -> Result<DenseTensor> {
        if pi.len() != self.order {
            return Err(TensorError::InvalidPermutation(format!(
                "permutation of {} symbols applied to an order-{} tensor",
                pi.len(),
                self.order
            )));
        }
        let k = self.order;
        let n = self.dim;
        let mut stride = vec![1usize; k];
        for j in (0..k.saturating_sub(1)).rev() {
            stride[j] = stride[j + 1] * n;
        }
        // Source position p feeds destination position π(p).
        let dest_stride: Vec<usize> = (0..k).map(|p| stride[pi.image(p)]).collect();
        let mut data = vec![0.0; self.data.len()];
        let mut idx = vec![0usize; k];
        for &value in &self.data {
            let dest: usize = idx.iter().zip(&dest_stride).map(|(i, s)| i * s).sum();
            data[dest] = value;
            advance(&mut idx, n);
        }
        Ok(DenseTensor { order: k, dim: n, data })
    }

    /// Average of `permute(T, π)` over the symmetric group.
    pub fn symmetrize(&self) -> DenseTensor {
        let perms = Permutation::all(self.order);
        let mut acc = vec![0.0; self.data.len()];
        for pi in &perms {
            let p = self.permute(pi).expect("order matches");
            for (a, b) in acc.iter_mut().zip(&p.data) {
                *a += b;
            }
        }
        let scale = 1.0 / perms.len() as f64;
        acc.iter_mut().for_each(|a| *a *= scale);
        DenseTensor { order: self.order, dim: self.dim, data: acc }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        Permutation::all(self.order).iter().all(|pi| {
            let p = self.permute(pi).expect("order matches");
            p.data.iter().zip(&self.data).all(|(a, b)| (a - b).abs() <= tol)
        })
    }
}

/// Odometer increment of a row-major multi-index.
pub(crate) fn advance(idx: &mut [usize], dim: usize) {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return;
        }
        *slot = 0;
    }
}
