use std::sync::atomic::{AtomicUsize, Ordering};

use approx::assert_abs_diff_eq;
use ndarray::{Array1, Array2, ArrayView1};
use ndarray_linalg::QR;
use proptest::prelude::*;
use spectral_ops::{
    dense_eig_oracle, op_gram, op_titi, top_singular_shifted, top_singular_value, DenseOp, LinearOperator,
    NormalOp, PowerOptions, SpectralError,
};
use tensor_core::rng::{gaussian_vec, stream};
use tensor_core::DenseTensor;

fn random_tensor(order: usize, n: usize, seed: u64) -> DenseTensor {
    DenseTensor::from_vec(order, n, gaussian_vec(&mut stream(seed, 0), n.pow(order as u32))).unwrap()
}

fn precise(seed: u64) -> PowerOptions {
    PowerOptions::seeded(seed).with_tol(1e-12).with_max_iter(20_000)
}

fn with_spectrum(values: &[f64], seed: u64) -> Array2<f64> {
    let d = values.len();
    let g = Array2::from_shape_vec((d, d), gaussian_vec(&mut stream(seed, 0), d * d)).unwrap();
    let (q, _) = g.qr().unwrap();
    let scaled = &q * &Array1::from(values.to_vec()).view().insert_axis(ndarray::Axis(0));
    let m = scaled.dot(&q.t());
    (&m + &m.t()) * 0.5
}

#[test]
fn diagonal_top_pair() {
    let op = DenseOp::new(ndarray::arr2(&[[3.0, 0.0], [0.0, 1.0]]));
    let rep = top_singular_shifted(&op, 0.0, &precise(1)).unwrap();
    assert!(rep.converged);
    assert_abs_diff_eq!(rep.value, 3.0, epsilon = 1e-10);
    assert_abs_diff_eq!(rep.vector[0].abs(), 1.0, epsilon = 1e-8);
    assert_eq!(rep.shift, 0.0);
    assert_eq!(rep.seed, 1);
}

#[test]
fn rejects_bad_inputs() {
    let op = DenseOp::new(ndarray::arr2(&[[1.0, 2.0], [0.0, 1.0]]));
    assert!(matches!(top_singular_shifted(&op, 0.0, &precise(0)), Err(SpectralError::NotSymmetric)));
    let sym = DenseOp::new(Array2::eye(2));
    let bad = PowerOptions::seeded(0).with_tol(0.0);
    assert!(matches!(top_singular_shifted(&sym, 0.0, &bad), Err(SpectralError::InvalidTolerance(_))));
    let t = random_tensor(3, 3, 1);
    let titi = op_titi(&t, true).unwrap();
    assert!(top_singular_shifted(&titi, 0.0, &precise(0)).is_err());
}

#[test]
fn gram_n50_shifted_matches_dense() {
    let n = 50;
    let t = random_tensor(3, n, 2);
    let op = op_gram(&t).unwrap();
    let u = t.default_unfolding().materialize();
    let spec = dense_eig_oracle(&u.dot(&u.t())).unwrap();
    let (top, vec) = spec.top();
    let rep = top_singular_shifted(&op, (n * n) as f64, &precise(3)).unwrap();
    assert!(rep.converged);
    assert!((rep.value - top).abs() <= 1e-6 * top, "{} vs {}", rep.value, top);
    assert!(rep.vector.dot(&vec).abs() >= 1.0 - 1e-6);
}

#[test]
fn floor_reshift_recovers_top() {
    // Shifted spectrum {1, -5}: plain power iteration would lock onto the bottom.
    let op = DenseOp::new(with_spectrum(&[11.0, 7.0, 5.0], 4));
    let rep = top_singular_shifted(&op, 10.0, &precise(5)).unwrap();
    assert_abs_diff_eq!(rep.value, 11.0, epsilon = 1e-9);
    let mut opts = precise(5);
    opts.floor_reshift = false;
    let raw = top_singular_shifted(&op, 10.0, &opts).unwrap();
    assert_abs_diff_eq!(raw.value, 5.0, epsilon = 1e-9);
}

#[test]
fn stop_above_reports_exceeded() {
    let op = DenseOp::new(with_spectrum(&[10.0, 1.0, 0.5, 0.1], 6));
    let mut opts = precise(7);
    opts.stop_above = Some(2.0);
    let rep = top_singular_shifted(&op, 0.0, &opts).unwrap();
    assert!(rep.exceeded);
    assert!(rep.value > 2.0);
    assert!(rep.matvecs <= 3);
}

#[test]
fn max_iter_exhaustion_is_flagged() {
    let op = DenseOp::new(with_spectrum(&[1.0, 0.999, 0.5], 8));
    let opts = PowerOptions::seeded(1).with_tol(1e-14).with_max_iter(5);
    let rep = top_singular_shifted(&op, 0.0, &opts).unwrap();
    assert!(!rep.converged);
    assert_eq!(rep.matvecs, 5);
}

/// Returns zero for the first `zeros` applications, then acts as the identity scaled by 2.
struct Stubborn {
    calls: AtomicUsize,
    zeros: usize,
}

impl LinearOperator for Stubborn {
    fn dim(&self) -> usize {
        3
    }
    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        if self.calls.fetch_add(1, Ordering::SeqCst) < self.zeros {
            Array1::zeros(3)
        } else {
            &x * 2.0
        }
    }
    fn is_symmetric(&self) -> bool {
        true
    }
    fn cost_hint(&self) -> f64 {
        3.0
    }
}

#[test]
fn restarts_after_degenerate_start() {
    let op = Stubborn { calls: AtomicUsize::new(0), zeros: 2 };
    let rep = top_singular_shifted(&op, 0.0, &precise(1)).unwrap();
    assert_eq!(rep.restarts, 2);
    assert!(rep.converged);
    assert_abs_diff_eq!(rep.value, 2.0, epsilon = 1e-12);

    let hopeless = Stubborn { calls: AtomicUsize::new(0), zeros: 100 };
    let rep = top_singular_shifted(&hopeless, 0.0, &precise(1)).unwrap();
    assert_eq!(rep.restarts, 3);
    assert!(!rep.converged);
}

#[test]
fn matvec_count_bound() {
    let d = 40;
    let mut values: Vec<f64> = vec![1.0, 0.5];
    values.extend((2..d).map(|j| 0.5 / j as f64));
    let op = DenseOp::new(with_spectrum(&values, 9));
    let tol = 1e-8;
    let opts = PowerOptions::seeded(2).with_tol(tol).with_max_iter(1000);
    let rep = top_singular_shifted(&op, 0.0, &opts).unwrap();
    assert!(rep.converged);
    let bound = ((d as f64 / tol).ln() / 2f64.ln()).ceil() as usize + rep.restarts * 1000;
    assert!(rep.matvecs <= bound, "{} > {}", rep.matvecs, bound);
}

#[test]
fn singular_value_of_titi_matches_dense() {
    let n = 5;
    let t = random_tensor(3, n, 10);
    let op = op_titi(&t, true).unwrap();
    let normal = NormalOp::new(&op);
    let dense = spectral_ops::materialize(&normal);
    let spec = dense_eig_oracle(&dense).unwrap();
    let (top, vec) = spec.top();
    let rep = top_singular_value(&op, &precise(11)).unwrap();
    assert!((rep.value - top.sqrt()).abs() <= 1e-6 * top.sqrt());
    assert!(rep.vector.dot(&vec).abs() >= 1.0 - 1e-6);
    assert_eq!(rep.matvecs % 2, 0);
}

#[test]
fn gram_n30_top_pair_matches_dense() {
    let t = random_tensor(3, 30, 12);
    let op = op_gram(&t).unwrap();
    let spec = dense_eig_oracle(&spectral_ops::materialize(&op)).unwrap();
    let rep = top_singular_shifted(&op, 0.0, &precise(13)).unwrap();
    assert!((rep.value - spec.values[0]).abs() <= 1e-6 * spec.values[0]);
    assert!(rep.vector.dot(&spec.vectors.column(0)).abs() >= 1.0 - 1e-6);
    assert_eq!(op.dim(), 30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_does_not_change_top_vector(seed in 0u64..1000, frac in -2.0f64..0.9, d in 3usize..30) {
        let values: Vec<f64> = (0..d).map(|j| 10.0 - 8.0 * j as f64 / d as f64).collect();
        let m = with_spectrum(&values, seed);
        let spec = dense_eig_oracle(&m).unwrap();
        let op = DenseOp::new(m);
        let shift = frac * values[0];
        let rep = top_singular_shifted(&op, shift, &precise(seed)).unwrap();
        prop_assert!((rep.value - spec.values[0]).abs() < 1e-6 * spec.values[0]);
        prop_assert!(rep.vector.dot(&spec.vectors.column(0)).abs() > 1.0 - 1e-6);
        let norm = rep.vector.dot(&rep.vector).sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }
}
