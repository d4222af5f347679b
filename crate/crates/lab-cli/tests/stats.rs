use lab_cli::stats::{loglog_fit, mann_kendall, median};
use proptest::prelude::*;

#[test]
fn exact_power_law_has_zero_width_interval() {
    let xs = [50.0, 75.0, 100.0, 150.0, 200.0, 300.0];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 2.5 * x.powf(1.5)).collect();
    let fit = loglog_fit(&xs, &ys);
    assert!((fit.slope - 1.5).abs() < 1e-12);
    assert!((fit.intercept - 2.5_f64.ln()).abs() < 1e-10);
    assert!(fit.slope_se < 1e-10);
    assert_eq!(fit.points, 6);
}

#[test]
fn slope_interval_matches_textbook_regression() {
    // Residuals ±0.1 alternating on ln y around slope 1; computed by hand below.
    let lx = [0.0f64, 1.0, 2.0, 3.0];
    let ly = [0.1f64, 0.9, 2.1, 2.9];
    let xs: Vec<f64> = lx.iter().map(|v| v.exp()).collect();
    let ys: Vec<f64> = ly.iter().map(|v| v.exp()).collect();
    let fit = loglog_fit(&xs, &ys);
    // sxx = 5, sxy = 4.8 → slope 0.96; intercept 1.5 − 0.96·1.5 = 0.06.
    assert!((fit.slope - 0.96).abs() < 1e-12);
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - 0.06 - 0.96 * x).powi(2)).sum();
    let se = (rss / 2.0 / 5.0).sqrt();
    assert!((fit.slope_se - se).abs() < 1e-12);
    // t quantile with 2 degrees of freedom at 0.975.
    let t = 4.302652729911275;
    assert!((fit.ci.1 - fit.slope - t * se).abs() < 1e-9);
}

fn brute_s(xs: &[f64], ys: &[f64]) -> i64 {
    let mut s = 0;
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if xs[i] < xs[j] {
                s += (ys[j] - ys[i]).signum() as i64 * (ys[j] != ys[i]) as i64;
            }
        }
    }
    s
}

#[test]
fn mann_kendall_flags_a_decreasing_series() {
    let xs: Vec<f64> = (0..10).map(f64::from).collect();
    let down: Vec<f64> = xs.iter().map(|x| 10.0 - x).collect();
    let mk = mann_kendall(&xs, &down);
    assert_eq!(mk.s, -45);
    // Var S = 10·9·25/18 = 125; z = (−45 + 1)/√125.
    assert!((mk.z + 44.0 / 125f64.sqrt()).abs() < 1e-12);
    assert!(mk.p_decreasing < 1e-4);
    let up = mann_kendall(&xs, &xs);
    assert!(up.p_decreasing > 0.999);
}

#[test]
fn mann_kendall_ignores_ties_in_x() {
    let xs = [1.0, 1.0, 2.0, 2.0];
    let ys = [5.0, 1.0, 3.0, 4.0];
    let mk = mann_kendall(&xs, &ys);
    assert_eq!(mk.s, brute_s(&xs, &ys));
    // Cross pairs only: 3−5, 4−5 fall; 3−1, 4−1 rise.
    assert_eq!(mk.s, 0);
}

#[test]
fn median_of_even_sample() {
    assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
}

proptest! {
    #[test]
    fn mann_kendall_s_matches_pair_count(ys in proptest::collection::vec(-5i32..5, 3..20)) {
        let ys: Vec<f64> = ys.into_iter().map(f64::from).collect();
        let xs: Vec<f64> = (0..ys.len()).map(|i| (i / 2) as f64).collect();
        let mk = mann_kendall(&xs, &ys);
        prop_assert_eq!(mk.s, brute_s(&xs, &ys));
        prop_assert!((0.0..=1.0).contains(&mk.p_decreasing));
    }

    #[test]
    fn fit_recovers_any_slope(slope in -3.0f64..3.0, c in 0.1f64..10.0) {
        let xs = [2.0, 3.0, 5.0, 8.0, 13.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| c * x.powf(slope)).collect();
        prop_assert!((loglog_fit(&xs, &ys).slope - slope).abs() < 1e-9);
    }
}
