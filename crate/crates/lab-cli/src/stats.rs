use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

pub fn median(xs: &[f64]) -> f64 {
    recovery::quantile(xs, 0.5)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Least-squares line `ln y = intercept + slope·ln x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    /// 95% confidence interval for the slope.
    pub ci: (f64, f64),
    pub points: usize,
}

pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> LogLogFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 3, "need at least three points");
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (mean(&lx), mean(&ly));
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let m = xs.len();
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_se = (rss / (m as f64 - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, m as f64 - 2.0).expect("positive degrees of freedom").inverse_cdf(0.975);
    LogLogFit { slope, intercept, slope_se, ci: (slope - t * slope_se, slope + t * slope_se), points: m }
}

/// Mann-Kendall trend statistic of `ys` ordered by `xs`; pairs with equal `x` are not compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MannKendall {
    pub s: i64,
    pub z: f64,
    /// One-sided p-value against a decreasing trend.
    pub p_decreasing: f64,
}

pub fn mann_kendall(xs: &[f64], ys: &[f64]) -> MannKendall {
    assert_eq!(xs.len(), ys.len());
    let m = xs.len();
    let mut s = 0i64;
    for i in 0..m {
        for j in 0..m {
            if xs[i] < xs[j] {
                s += match ys[j].partial_cmp(&ys[i]) {
                    Some(std::cmp::Ordering::Greater) => 1,
                    Some(std::cmp::Ordering::Less) => -1,
                    _ => 0,
                };
            }
        }
    }
    // Variance with the tie correction for groups of equal x.
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < m {
        let mut j = i;
        while j < m && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        ties += t * (t - 1.0) * (2.0 * t + 5.0);
        i = j;
    }
    let mf = m as f64;
    let var = (mf * (mf - 1.0) * (2.0 * mf + 5.0) - ties) / 18.0;
    let z = if var <= 0.0 {
        0.0
    } else if s > 0 {
        (s as f64 - 1.0) / var.sqrt()
    } else if s < 0 {
        (s as f64 + 1.0) / var.sqrt()
    } else {
        0.0
    };
    let p_decreasing = Normal::standard().cdf(z);
    MannKendall { s, z, p_decreasing }
}
