use approx::assert_abs_diff_eq;
use ndarray::Array1;
use tensor_core::io::{load_instance, read_matrix, read_tensor, save_instance, sidecar_path, write_matrix, write_tensor};
use tensor_core::rng::{derive_seed, gaussian_vec, stream};
use tensor_core::{expected_gram, gen_spiked, gen_spiked_with, GenOptions, NoiseKind, TensorError};

#[test]
fn pure_noise_small() {
    let inst = gen_spiked(2, 3, 0.0, NoiseKind::IidGaussian, 1).unwrap();
    assert_eq!(inst.tensor.len(), 8);
    assert_abs_diff_eq!(inst.v0.dot(&inst.v0), 1.0, epsilon = 1e-12);
    let big = gen_spiked(30, 3, 0.0, NoiseKind::IidGaussian, 1).unwrap();
    let mean = big.tensor.as_slice().iter().sum::<f64>() / big.tensor.len() as f64;
    assert!(mean.abs() < 4.0 / (big.tensor.len() as f64).sqrt());
}

#[test]
fn zero_noise_is_scaled_rank_one() {
    let mut opts = GenOptions::new(3, 3, 5.0, NoiseKind::IidGaussian, 3);
    opts.zero_noise = true;
    let inst = gen_spiked_with(&opts).unwrap();
    let v = &inst.v0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                assert_abs_diff_eq!(inst.tensor.get(&[a, b, c]), 5.0 * v[a] * v[b] * v[c], epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn symmetric_noise_is_symmetric() {
    let inst = gen_spiked(50, 3, 0.0, NoiseKind::SymmetricGaussian, 7).unwrap();
    assert!(inst.tensor.is_symmetric(1e-14));
}

#[test]
fn caller_supplied_v0_is_normalized() {
    let mut opts = GenOptions::new(4, 3, 1.0, NoiseKind::IidGaussian, 3);
    opts.v0 = Some(Array1::from(vec![2.0, 0.0, 0.0, 0.0]));
    let inst = gen_spiked_with(&opts).unwrap();
    assert_eq!(inst.v0.to_vec(), vec![1.0, 0.0, 0.0, 0.0]);
    opts.v0 = Some(Array1::zeros(4));
    assert!(gen_spiked_with(&opts).is_err());
    opts.v0 = Some(Array1::zeros(3));
    assert!(matches!(gen_spiked_with(&opts), Err(TensorError::DimensionMismatch { .. })));
}

#[test]
fn generation_is_deterministic() {
    let a = gen_spiked(6, 3, 2.0, NoiseKind::IidGaussian, 42).unwrap();
    let b = gen_spiked(6, 3, 2.0, NoiseKind::IidGaussian, 42).unwrap();
    let c = gen_spiked(6, 3, 2.0, NoiseKind::IidGaussian, 43).unwrap();
    assert_eq!(a.tensor, b.tensor);
    assert_eq!(a.v0, b.v0);
    assert_ne!(a.tensor, c.tensor);
}

#[test]
fn invalid_arguments() {
    assert!(gen_spiked(1, 3, 1.0, NoiseKind::IidGaussian, 0).is_err());
    assert!(gen_spiked(3, 2, 1.0, NoiseKind::IidGaussian, 0).is_err());
    assert!(gen_spiked(3, 3, -1.0, NoiseKind::IidGaussian, 0).is_err());
    assert!(gen_spiked(3, 3, f64::NAN, NoiseKind::IidGaussian, 0).is_err());
    assert!(matches!(
        gen_spiked(3, 3, 1.0, NoiseKind::SemiRandom, 0),
        Err(TensorError::UnsupportedNoise(NoiseKind::SemiRandom))
    ));
    assert!(matches!(gen_spiked(1000, 3, 1.0, NoiseKind::IidGaussian, 0), Err(TensorError::Capacity { .. })));
}

#[test]
fn streams_are_independent_and_replayable() {
    let a = gaussian_vec(&mut stream(5, 1), 4);
    let b = gaussian_vec(&mut stream(5, 1), 4);
    let c = gaussian_vec(&mut stream(5, 2), 4);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(derive_seed(9, &[1, 2]), derive_seed(9, &[1, 2]));
    assert_ne!(derive_seed(9, &[1, 2]), derive_seed(9, &[2, 1]));
}

#[test]
fn expected_gram_n1() {
    assert_eq!(expected_gram(1).into_raw_vec_and_offset().0, vec![1.0]);
}

#[test]
fn expected_gram_represents_fourth_power_of_norm() {
    let n = 5;
    let x = Array1::from(gaussian_vec(&mut stream(17, 0), n));
    let xx: Array1<f64> = x.iter().flat_map(|a| x.iter().map(move |b| a * b)).collect();
    let g = expected_gram(n) / n as f64;
    let norm2 = x.dot(&x);
    assert_abs_diff_eq!(xx.dot(&g.dot(&xx)), norm2 * norm2, epsilon = 1e-10);
}

#[test]
fn expected_gram_monte_carlo() {
    let n = 4;
    let draws = 10_000;
    let d = n * n;
    let mut sum = vec![0.0; d * d];
    let mut sum_sq = vec![0.0; d * d];
    let mut rng = stream(2024, 0);
    let mut acc = vec![0.0; d * d];
    for _ in 0..draws {
        let a = gaussian_vec(&mut rng, n * n * n);
        acc.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            let s = &a[i * d..(i + 1) * d];
            for p in 0..n {
                for q in 0..n {
                    for r in 0..n {
                        for t in 0..n {
                            acc[(p * n + q) * d + r * n + t] += s[p * n + r] * s[q * n + t];
                        }
                    }
                }
            }
        }
        for (j, v) in acc.iter().enumerate() {
            sum[j] += v;
            sum_sq[j] += v * v;
        }
    }
    let e = expected_gram(n);
    let m = draws as f64;
    for j in 0..d * d {
        let mean = sum[j] / m;
        let var = (sum_sq[j] / m - mean * mean) * m / (m - 1.0);
        let se = (var / m).sqrt();
        let target = e[[j / d, j % d]];
        assert!((mean - target).abs() <= 3.0 * se, "entry {j}: mean {mean} target {target} se {se}");
    }
}

#[test]
fn io_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.bin");
    let inst = gen_spiked(5, 3, 1.5, NoiseKind::SymmetricGaussian, 11).unwrap();
    save_instance(&path, &inst).unwrap();
    assert!(sidecar_path(&path).exists());
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..12], b"SPIKEDTENSOR");
    assert_eq!(bytes.len(), 16 + 8 + 125 * 8);
    let back = load_instance(&path).unwrap();
    assert_eq!(back.tensor, inst.tensor);
    assert_eq!(back.v0, inst.v0);
    assert_eq!(back.tau, inst.tau);
    assert_eq!(back.noise_kind, inst.noise_kind);
    assert_eq!(back.seed, inst.seed);

    let m = ndarray::Array2::from_shape_fn((3, 3), |(i, j)| (i * 3 + j) as f64 - 0.5);
    let mut buf = Vec::new();
    write_matrix(&mut buf, &m).unwrap();
    assert_eq!(read_matrix(&mut buf.as_slice()).unwrap(), m);

    let mut bad = Vec::new();
    write_tensor(&mut bad, &inst.tensor).unwrap();
    bad[0] = b'X';
    assert!(matches!(read_tensor(&mut bad.as_slice()), Err(TensorError::Format(_))));
    let mut short = Vec::new();
    write_tensor(&mut short, &inst.tensor).unwrap();
    short.truncate(100);
    assert!(read_tensor(&mut short.as_slice()).is_err());
}
