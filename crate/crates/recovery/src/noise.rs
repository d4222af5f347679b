use tensor_core::DenseTensor;

/// How the expected noise contribution is removed before power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftRule {
    /// Noise variance estimated from the entries with pairwise distinct indices.
    Estimated,
    /// Known per-entry noise variance.
    Variance(f64),
    /// No shift at all (the naive power method).
    None,
    /// Absolute shift, used as given.
    Fixed(f64),
}

impl Default for ShiftRule {
    fn default() -> Self {
        Self::Estimated
    }
}

impl ShiftRule {
    /// Shift for an operator whose pure-noise expectation is `base·σ²·Id`.
    pub fn resolve(&self, t: &DenseTensor, base: f64) -> f64 {
        match *self {
            Self::Estimated => base * noise_variance(t),
            Self::Variance(v) => base * v,
            Self::None => 0.0,
            Self::Fixed(c) => c,
        }
    }
}

/// Mean square of the entries whose multi-index has pairwise distinct coordinates.
///
/// Falls back to all entries when `n < k`.
pub fn noise_variance(t: &DenseTensor) -> f64 {
    let (k, n) = (t.order(), t.dim());
    if n < k {
        return t.as_slice().iter().map(|x| x * x).sum::<f64>() / t.len() as f64;
    }
    let mut idx = vec![0usize; k];
    let mut sum = 0.0;
    let mut count = 0usize;
    for &x in t.as_slice() {
        if distinct(&idx) {
            sum += x * x;
            count += 1;
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    sum / count as f64
}

fn distinct(idx: &[usize]) -> bool {
    (0..idx.len()).all(|a| (a + 1..idx.len()).all(|b| idx[a] != idx[b]))
}
