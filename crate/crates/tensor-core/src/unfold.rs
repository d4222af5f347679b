use ndarray::{Array2, ArrayView2};

use crate::{DenseTensor, Result, TensorError};

/// Matrix view of a tensor with one group of modes as rows and the rest as columns.
///
/// Row and column multi-indices are row-major over their modes in the given order.
#[derive(Debug, Clone)]
pub struct Unfolding<'a> {
    tensor: &'a DenseTensor,
    row_modes: Vec<usize>,
    col_modes: Vec<usize>,
    row_strides: Vec<usize>,
    col_strides: Vec<usize>,
}

impl<'a> Unfolding<'a> {
    pub fn new(tensor: &'a DenseTensor, row_modes: &[usize]) -> Result<Self> {
        let k = tensor.order();
        let mut seen = vec![false; k];
        for &m in row_modes {
            if m >= k {
                return Err(TensorError::InvalidSplit(format!("mode {m} out of range for order {k}")));
            }
            if seen[m] {
                return Err(TensorError::InvalidSplit(format!("mode {m} repeated")));
            }
            seen[m] = true;
        }
        let col_modes: Vec<usize> = (0..k).filter(|m| !seen[*m]).collect();
        let n = tensor.dim();
        let stride = |m: usize| n.pow((k - 1 - m) as u32);
        Ok(Self {
            tensor,
            row_strides: row_modes.iter().map(|&m| stride(m)).collect(),
            col_strides: col_modes.iter().map(|&m| stride(m)).collect(),
            row_modes: row_modes.to_vec(),
            col_modes,
        })
    }

    /// First `⌊k/2⌋` modes as rows.
    pub fn squarest(tensor: &'a DenseTensor) -> Self {
        let rows: Vec<usize> = (0..tensor.order() / 2).collect();
        Self::new(tensor, &rows).expect("leading split is valid")
    }

    pub fn rows(&self) -> usize {
        self.tensor.dim().pow(self.row_modes.len() as u32)
    }

    pub fn cols(&self) -> usize {
        self.tensor.dim().pow(self.col_modes.len() as u32)
    }

    pub fn row_modes(&self) -> &[usize] {
        &self.row_modes
    }

    pub fn col_modes(&self) -> &[usize] {
        &self.col_modes
    }

    fn offset_of(&self, mut r: usize, strides: &[usize]) -> usize {
        let n = self.tensor.dim();
        let mut off = 0;
        for s in strides.iter().rev() {
            off += (r % n) * s;
            r /= n;
        }
        off
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let off = self.offset_of(r, &self.row_strides) + self.offset_of(c, &self.col_strides);
        self.tensor.as_slice()[off]
    }

    /// Zero-copy view when the rows are exactly the leading modes in order.
    pub fn view(&self) -> Option<ArrayView2<'a, f64>> {
        let leading = self.row_modes.iter().enumerate().all(|(j, &m)| j == m);
        leading.then(|| self.tensor.matrix(self.row_modes.len()))
    }

    pub fn materialize(&self) -> Array2<f64> {
        if let Some(v) = self.view() {
            return v.to_owned();
        }
        let col_off: Vec<usize> = (0..self.cols()).map(|c| self.offset_of(c, &self.col_strides)).collect();
        let data = self.tensor.as_slice();
        Array2::from_shape_fn((self.rows(), self.cols()), |(r, c)| {
            data[self.offset_of(r, &self.row_strides) + col_off[c]]
        })
    }
}

impl DenseTensor {
    pub fn unfold(&self, row_modes: &[usize]) -> Result<Unfolding<'_>> {
        Unfolding::new(self, row_modes)
    }

    pub fn default_unfolding(&self) -> Unfolding<'_> {
        Unfolding::squarest(self)
    }
}
