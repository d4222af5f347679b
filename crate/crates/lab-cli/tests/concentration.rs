use lab_cli::concentration::{measure, run_concentration, ConcentrationOptions, Statistic};
use ndarray::Array2;
use tensor_core::rng::{self, ids};

fn dense_centered_titi(a: &[f64], n: usize) -> Array2<f64> {
    let n2 = n * n;
    Array2::from_shape_fn((n2, n2), |(r, c)| {
        let (j, k, l, m) = (r / n, r % n, c / n, c % n);
        let s: f64 = (0..n).map(|i| a[i * n2 + j * n + l] * a[i * n2 + k * n + m]).sum();
        s - if j == k && l == m { n as f64 } else { 0.0 }
    })
}

fn top_abs_eig(m: &Array2<f64>) -> f64 {
    spectral_ops::dense_eig_oracle(m).unwrap().values.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

#[test]
fn titi_statistic_matches_dense_kronecker_sum() {
    let n = 6;
    let seed = 9;
    let a = rng::gaussian_vec(&mut rng::stream(seed, ids::NOISE), n * n * n);
    let m = dense_centered_titi(&a, n);
    let want = top_abs_eig(&m.t().dot(&m)).sqrt() / (n as f64).ln().sqrt();
    let got = measure(Statistic::TitiCenteredNorm, n, seed, &ConcentrationOptions { power_steps: 3000 }).unwrap();
    assert!((got - want).abs() <= 1e-4 * want, "{got} vs {want}");
}

#[test]
fn gram_deviation_matches_direct_formula() {
    let n = 5;
    let seed = 2;
    let g = rng::gaussian_vec(&mut rng::stream(seed, ids::NOISE), n * n * n);
    let a = Array2::from_shape_vec((n * n, n), g).unwrap();
    let dev = a.t().dot(&a) - Array2::<f64>::eye(n) * (n * n) as f64;
    let got = measure(Statistic::GramDeviation, n, seed, &ConcentrationOptions::default()).unwrap();
    assert!((got - top_abs_eig(&dev)).abs() < 1e-9);
}

#[test]
fn square_norm_slope_is_one_half_at_small_sizes() {
    let rec = run_concentration(Statistic::SquareOpnorm, &[20, 30, 40, 60, 80], 4, 1, &ConcentrationOptions::default())
        .unwrap();
    assert!((rec.fit.slope - 0.5).abs() < 0.15, "{:?}", rec.fit);
    assert_eq!(rec.points.len(), 5);
    assert!(rec.points.iter().all(|p| p.norms.len() == 4));
}

#[test]
fn too_few_sizes_is_an_error() {
    assert!(run_concentration(Statistic::VaNorm, &[5, 6, 7], 2, 0, &ConcentrationOptions::default()).is_err());
}

#[test]
fn names_round_trip() {
    for s in Statistic::ALL {
        assert_eq!(s.as_str().parse::<Statistic>().unwrap(), s);
    }
}
