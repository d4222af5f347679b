use approx::assert_abs_diff_eq;
use ndarray::{arr2, Array2};
use spectral_ops::{dense_eig_oracle, dense_eig_oracle_capped, is_psd, min_eigenvalue, SpectralError};
use tensor_core::rng::{gaussian_vec, stream};

fn random_symmetric(d: usize, seed: u64) -> Array2<f64> {
    let g = Array2::from_shape_vec((d, d), gaussian_vec(&mut stream(seed, 0), d * d)).unwrap();
    (&g + &g.t()) * 0.5
}

#[test]
fn identity_spectrum() {
    let s = dense_eig_oracle(&Array2::eye(3)).unwrap();
    assert_eq!(s.values.to_vec(), vec![1.0, 1.0, 1.0]);
    // Ties resolve to the lexicographically largest vector first.
    for j in 0..3 {
        for i in 0..3 {
            assert_abs_diff_eq!(s.vectors[[i, j]].abs(), if i == j { 1.0 } else { 0.0 }, epsilon = 1e-12);
        }
    }
    assert!(s.vectors[[0, 0]] > 0.0);
}

#[test]
fn rank_one_identity_vector() {
    let n = 4;
    let w = tensor_core::gram::vec_identity(n);
    let m = w.view().insert_axis(ndarray::Axis(1)).dot(&w.view().insert_axis(ndarray::Axis(0)));
    let s = dense_eig_oracle(&m).unwrap();
    assert_abs_diff_eq!(s.values[0], 4.0, epsilon = 1e-12);
    for j in 1..n * n {
        assert_abs_diff_eq!(s.values[j], 0.0, epsilon = 1e-12);
    }
    let top = s.vectors.column(0);
    assert_abs_diff_eq!(top.dot(&w).abs(), 2.0, epsilon = 1e-12);
}

#[test]
fn random_reconstruction_and_ordering() {
    let m = random_symmetric(50, 3);
    let s = dense_eig_oracle(&m).unwrap();
    let r = s.reconstruct();
    let err = (&r - &m).iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    assert!(err < 1e-9, "reconstruction error {err}");
    for j in 1..50 {
        assert!(s.values[j - 1] >= s.values[j]);
    }
    for j in 0..50 {
        let col = s.vectors.column(j);
        let first = col.iter().find(|x| x.abs() > 1e-12).unwrap();
        assert!(*first > 0.0);
        assert_abs_diff_eq!(col.dot(&col), 1.0, epsilon = 1e-12);
    }
    let vtv = s.vectors.t().dot(&s.vectors);
    assert!((&vtv - &Array2::<f64>::eye(50)).iter().all(|x| x.abs() < 1e-10));
}

#[test]
fn oracle_errors() {
    let rect = Array2::<f64>::zeros((2, 3));
    assert!(matches!(dense_eig_oracle(&rect), Err(SpectralError::NotSquare(2, 3))));
    let mut nan = Array2::<f64>::eye(2);
    nan[[0, 1]] = f64::NAN;
    assert!(matches!(dense_eig_oracle(&nan), Err(SpectralError::NonFinite)));
    assert!(matches!(dense_eig_oracle_capped(&Array2::eye(5), 4), Err(SpectralError::TooLarge { dim: 5, cap: 4 })));
    assert!(matches!(dense_eig_oracle(&arr2(&[[1.0, 2.0], [0.0, 1.0]])), Err(SpectralError::NotSymmetric)));
}

#[test]
fn deterministic_output() {
    let m = random_symmetric(20, 4);
    let a = dense_eig_oracle(&m).unwrap();
    let b = dense_eig_oracle(&m).unwrap();
    assert_eq!(a.values, b.values);
    assert_eq!(a.vectors, b.vectors);
}

#[test]
fn psd_checks() {
    let m = arr2(&[[2.0, 1.0], [1.0, 2.0]]);
    assert_abs_diff_eq!(min_eigenvalue(&m).unwrap(), 1.0, epsilon = 1e-12);
    assert!(is_psd(&m, 0.0).unwrap());
    let n = arr2(&[[1.0, 2.0], [2.0, 1.0]]);
    assert_abs_diff_eq!(min_eigenvalue(&n).unwrap(), -1.0, epsilon = 1e-12);
    assert!(!is_psd(&n, 0.5).unwrap());
    assert!(is_psd(&n, 1.0 + 1e-9).unwrap());
    let singular = arr2(&[[1.0, 1.0], [1.0, 1.0]]);
    assert!(is_psd(&singular, 1e-12).unwrap());
}
