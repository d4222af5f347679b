use ndarray::Array2;
use sos_moment_sdp::MomentMatrix;

use crate::{identity_orbit, ConstructionParams, Provenance, PseudoExpectation};

/// `E^μ x^α` for the uniform distribution on the unit sphere; `idx` is a multiset of at most
/// four indices.
pub fn uniform_value(n: usize, idx: &[usize]) -> f64 {
    let nf = n as f64;
    let d = |a: usize, b: usize| f64::from(u8::from(idx[a] == idx[b]));
    match idx.len() {
        0 => 1.0,
        2 => d(0, 1) / nf,
        4 => (d(0, 1) * d(2, 3) + d(0, 2) * d(1, 3) + d(0, 3) * d(1, 2)) / (nf * (nf + 2.0)),
        _ => 0.0,
    }
}

pub fn uniform_matrix(n: usize) -> MomentMatrix {
    // The quartic block is filled from the closed form to avoid a per-entry closure.
    let d = MomentMatrix::dim_for(n);
    let mut m = Array2::zeros((d, d));
    let nf = n as f64;
    m[[0, 0]] = 1.0;
    for i in 0..n {
        let ii = 1 + n + i * n + i;
        m[[0, ii]] = 1.0 / nf;
        m[[ii, 0]] = 1.0 / nf;
        m[[1 + i, 1 + i]] = 1.0 / nf;
    }
    let q = identity_orbit(n) / (nf * nf + 2.0 * nf);
    m.slice_mut(ndarray::s![1 + n.., 1 + n..]).assign(&q);
    MomentMatrix::from_matrix(n, m).expect("uniform moments are symmetric")
}

pub fn uniform_moments(n: usize) -> PseudoExpectation {
    PseudoExpectation::new(uniform_matrix(n), Provenance::Uniform, ConstructionParams::default(), true)
}
