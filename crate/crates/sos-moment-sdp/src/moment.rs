use std::io::{Read, Write};

use ndarray::{Array1, Array2, ArrayView2};
use tensor_core::DenseTensor;

use crate::{ReducedBasis, Result, SdpError};

/// Row label of a moment matrix: a tuple of at most two variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tuple {
    Empty,
    One(usize),
    Two(usize, usize),
}

/// Degree-4 moment matrix indexed by tuples of length ≤ 2: `M[α, β] = pE x^α x^β`.
///
/// Row order: the empty tuple, then `(i)`, then `(i, j)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    n: usize,
    m: Array2<f64>,
}

impl MomentMatrix {
    pub fn dim_for(n: usize) -> usize {
        1 + n + n * n
    }

    pub fn from_matrix(n: usize, m: Array2<f64>) -> Result<Self> {
        let d = Self::dim_for(n);
        if m.dim() != (d, d) {
            return Err(SdpError::Shape { expected: d, got: m.nrows() });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(SdpError::Spectral(spectral_ops::SpectralError::NonFinite));
        }
        let defect = m.iter().zip(m.t().iter()).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        let scale = m.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
        if defect > 1e-10 * scale {
            return Err(SdpError::NotSymmetric(defect));
        }
        Ok(Self { n, m })
    }

    /// Builds the matrix from a function of the (unordered) variable multiset of `x^α x^β`.
    pub fn from_monomial_fn(n: usize, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let d = Self::dim_for(n);
        let mut m = Array2::zeros((d, d));
        let mut buf = Vec::with_capacity(4);
        for a in 0..d {
            for b in a..d {
                buf.clear();
                push_tuple(n, a, &mut buf);
                push_tuple(n, b, &mut buf);
                buf.sort_unstable();
                let v = f(&buf);
                m[[a, b]] = v;
                m[[b, a]] = v;
            }
        }
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> Array2<f64> {
        self.m
    }

    pub fn index(&self, t: Tuple) -> usize {
        match t {
            Tuple::Empty => 0,
            Tuple::One(i) => 1 + i,
            Tuple::Two(i, j) => 1 + self.n + i * self.n + j,
        }
    }

    pub fn get(&self, a: Tuple, b: Tuple) -> f64 {
        self.m[[self.index(a), self.index(b)]]
    }

    /// `pE 1`.
    pub fn pe_one(&self) -> f64 {
        self.m[[0, 0]]
    }

    /// `pE x^α` for a multiset of at most four indices, in any order.
    pub fn monomial(&self, idx: &[usize]) -> f64 {
        let mut s = [0usize; 4];
        let s = &mut s[..idx.len()];
        s.copy_from_slice(idx);
        s.sort_unstable();
        let (a, b) = canonical(self.n, s);
        self.m[[a, b]]
    }

    /// `pE ‖x‖⁴`.
    pub fn norm4(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for k in 0..n {
            for l in 0..n {
                s += self.m[[1 + n + k * n + k, 1 + n + l * n + l]];
            }
        }
        s
    }

    /// `pE x`.
    pub fn first_moments(&self) -> Array1<f64> {
        self.m.slice(ndarray::s![0, 1..=self.n]).to_owned()
    }

    /// `pE x xᵀ`.
    pub fn second_moments(&self) -> Array2<f64> {
        let n = self.n;
        self.m.slice(ndarray::s![0, 1 + n..]).to_owned().into_shape_with_order((n, n)).expect("n² row")
    }

    /// Block `pE x_i x_j x_k` as an n×n² matrix.
    pub fn cubic_block(&self) -> ArrayView2<'_, f64> {
        let n = self.n;
        self.m.slice(ndarray::s![1..=n, 1 + n..])
    }

    /// Block `pE x_i x_j x_k x_l` as an n²×n² matrix.
    pub fn quartic_block(&self) -> ArrayView2<'_, f64> {
        let n = self.n;
        self.m.slice(ndarray::s![1 + n.., 1 + n..])
    }

    /// Coefficients of `‖x‖² − 1` in tuple coordinates.
    pub fn sphere_vector(n: usize) -> Array1<f64> {
        let mut w = Array1::zeros(Self::dim_for(n));
        w[0] = -1.0;
        for k in 0..n {
            w[1 + n + k * n + k] = 1.0;
        }
        w
    }

    /// `‖M w‖` for the sphere vector `w`.
    pub fn kernel_residual(&self) -> f64 {
        let mw = self.m.dot(&Self::sphere_vector(self.n));
        mw.dot(&mw).sqrt()
    }

    /// Largest gap between two entries that represent the same monomial.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let d = self.dim();
        let mut buf = Vec::with_capacity(4);
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                buf.clear();
                push_tuple(n, a, &mut buf);
                push_tuple(n, b, &mut buf);
                buf.sort_unstable();
                let (ca, cb) = canonical(n, &buf);
                worst = worst.max((self.m[[a, b]] - self.m[[ca, cb]]).abs());
            }
        }
        worst
    }

    /// `QᵀMQ` in the orthonormal symmetric basis.
    pub fn reduced(&self) -> Array2<f64> {
        let basis = ReducedBasis::new(self.n);
        let emb: Vec<Vec<(usize, f64)>> = (0..basis.len()).map(|a| basis.embedding(a)).collect();
        let r = basis.len();
        let mut out = Array2::zeros((r, r));
        for a in 0..r {
            for b in a..r {
                let mut s = 0.0;
                for &(i, wi) in &emb[a] {
                    for &(j, wj) in &emb[b] {
                        s += wi * wj * self.m[[i, j]];
                    }
                }
                out[[a, b]] = s;
                out[[b, a]] = s;
            }
        }
        out
    }

    /// Smallest eigenvalue on the symmetric tuple subspace (via `QᵀMQ`).
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(spectral_ops::min_eigenvalue(&self.reduced())?)
    }

    /// `pE T(x)` for a cubic form.
    pub fn cubic_value(&self, t: &DenseTensor) -> Result<f64> {
        self.check_form(t, 3)?;
        Ok(self.cubic_block().iter().zip(t.as_slice()).map(|(a, b)| a * b).sum())
    }

    /// `pE T(x)` for a quartic form.
    pub fn quartic_value(&self, t: &DenseTensor) -> Result<f64> {
        self.check_form(t, 4)?;
        Ok(self.quartic_block().iter().zip(t.as_slice()).map(|(a, b)| a * b).sum())
    }

    fn check_form(&self, t: &DenseTensor, order: usize) -> Result<()> {
        if t.order() != order {
            return Err(SdpError::Order { expected: order, got: t.order() });
        }
        if t.dim() != self.n {
            return Err(SdpError::Shape { expected: self.n, got: t.dim() });
        }
        Ok(())
    }

    pub fn write(&self, w: &mut impl Write) -> Result<()> {
        Ok(tensor_core::io::write_matrix(w, &self.m)?)
    }

    pub fn read(r: &mut impl Read) -> Result<Self> {
        let m = tensor_core::io::read_matrix(r)?;
        let d = m.nrows();
        let n = ((4 * d - 3) as f64).sqrt() as usize / 2;
        let n = (n.saturating_sub(1)..=n + 1).find(|&k| Self::dim_for(k) == d).ok_or(SdpError::Shape { expected: 0, got: d })?;
        Self::from_matrix(n, m)
    }
}

fn push_tuple(n: usize, a: usize, out: &mut Vec<usize>) {
    if a == 0 {
        return;
    }
    if a <= n {
        out.push(a - 1);
        return;
    }
    let r = a - 1 - n;
    out.push(r / n);
    out.push(r % n);
}

/// Canonical entry for a sorted multiset of at most four indices.
fn canonical(n: usize, s: &[usize]) -> (usize, usize) {
    let two = |i: usize, j: usize| 1 + n + i * n + j;
    match *s {
        [] => (0, 0),
        [a] => (0, 1 + a),
        [a, b] => (0, two(a, b)),
        [a, b, c] => (1 + a, two(b, c)),
        [a, b, c, d] => (two(a, b), two(c, d)),
        _ => unreachable!("at most four indices"),
    }
}
