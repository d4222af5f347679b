use ndarray::{Array1, Array2, ArrayView1};
use rand::Rng;

/// A square linear map known only through its action on vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64>;
    fn is_symmetric(&self) -> bool;
    /// Approximate flops per `apply`.
    fn cost_hint(&self) -> f64;
}

/// Operators that can also apply their transpose.
pub trait Transpose: LinearOperator {
    fn apply_transpose(&self, x: ArrayView1<f64>) -> Array1<f64>;
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        (**self).apply(x)
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
    fn cost_hint(&self) -> f64 {
        (**self).cost_hint()
    }
}

impl<T: Transpose + ?Sized> Transpose for &T {
    fn apply_transpose(&self, x: ArrayView1<f64>) -> Array1<f64> {
        (**self).apply_transpose(x)
    }
}

#[derive(Debug, Clone)]
pub struct DenseOp {
    m: Array2<f64>,
    symmetric: bool,
}

impl DenseOp {
    pub fn new(m: Array2<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "dense operator must be square");
        let scale = m.iter().fold(0.0_f64, |a, x| a.max(x.abs())).max(1e-300);
        let symmetric = m.iter().zip(m.t().iter()).all(|(a, b)| (a - b).abs() <= 1e-12 * scale);
        Self { m, symmetric }
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.m
    }
}

impl LinearOperator for DenseOp {
    fn dim(&self) -> usize {
        self.m.nrows()
    }
    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.m.dot(&x)
    }
    fn is_symmetric(&self) -> bool {
        self.symmetric
    }
    fn cost_hint(&self) -> f64 {
        2.0 * (self.m.len() as f64)
    }
}

impl Transpose for DenseOp {
    fn apply_transpose(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.m.t().dot(&x)
    }
}

/// `OᵀO` for an operator that can transpose; always symmetric.
pub struct NormalOp<O> {
    inner: O,
}

impl<O: Transpose> NormalOp<O> {
    pub fn new(inner: O) -> Self {
        Self { inner }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: Transpose> LinearOperator for NormalOp<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let y = self.inner.apply(x);
        self.inner.apply_transpose(y.view())
    }
    fn is_symmetric(&self) -> bool {
        true
    }
    fn cost_hint(&self) -> f64 {
        2.0 * self.inner.cost_hint()
    }
}

/// `(O + Oᵀ)/2`, whose quadratic form agrees with that of `O`.
pub struct SymmetricPart<O> {
    inner: O,
}

impl<O: Transpose> SymmetricPart<O> {
    pub fn new(inner: O) -> Self {
        Self { inner }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: Transpose> LinearOperator for SymmetricPart<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let mut y = self.inner.apply(x);
        y += &self.inner.apply_transpose(x);
        y *= 0.5;
        y
    }
    fn is_symmetric(&self) -> bool {
        true
    }
    fn cost_hint(&self) -> f64 {
        2.0 * self.inner.cost_hint()
    }
}

/// Dense matrix of an operator, one basis vector at a time.
pub fn materialize(op: &impl LinearOperator) -> Array2<f64> {
    let d = op.dim();
    let mut m = Array2::zeros((d, d));
    let mut e = Array1::zeros(d);
    for j in 0..d {
        e[j] = 1.0;
        m.column_mut(j).assign(&op.apply(e.view()));
        e[j] = 0.0;
    }
    m
}

/// Largest `|<u, Av> - <v, Au>| / (‖u‖‖v‖‖A‖_est)` over random probe pairs.
pub fn max_asymmetry(op: &impl LinearOperator, probes: usize, rng: &mut impl Rng) -> f64 {
    let d = op.dim();
    let mut worst = 0.0_f64;
    for _ in 0..probes {
        let u = Array1::from(tensor_core::rng::gaussian_vec(rng, d));
        let v = Array1::from(tensor_core::rng::gaussian_vec(rng, d));
        let au = op.apply(u.view());
        let av = op.apply(v.view());
        let scale = (au.dot(&au).sqrt() * v.dot(&v).sqrt()).max(av.dot(&av).sqrt() * u.dot(&u).sqrt());
        if scale > 0.0 {
            worst = worst.max((u.dot(&av) - v.dot(&au)).abs() / scale);
        }
    }
    worst
}
