use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};
use spectral_ops::{dense_eig_oracle, op_titi, top_singular_value, PowerOptions};
use tensor_core::rng::{self, derive_seed, ids};
use tensor_core::DenseTensor;

use crate::stats::{loglog_fit, mean, LogLogFit};
use crate::{LabError, Result};

/// Random-matrix norms whose growth in `n` the theory predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `‖Σ_i A_i⊗A_i − E‖ / √(ln n)` for an iid n×n×n tensor; slope 3/2.
    TitiCenteredNorm,
    /// `‖A‖` for an n×n Gaussian matrix; slope 1/2.
    SquareOpnorm,
    /// `‖A‖` for an n²×n Gaussian matrix; slope 1.
    RectOpnorm,
    /// `‖AᵀA − n²·Id‖` for an n²×n Gaussian matrix; slope 3/2.
    GramDeviation,
    /// `‖Σ_i v_i A_i‖` for a fixed unit `v` and the slices of an iid tensor; slope 1/2.
    VaNorm,
}

impl Statistic {
    pub const ALL: [Statistic; 5] =
        [Self::TitiCenteredNorm, Self::SquareOpnorm, Self::RectOpnorm, Self::GramDeviation, Self::VaNorm];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::TitiCenteredNorm => "titi_centered_norm",
            Self::SquareOpnorm => "square_opnorm",
            Self::RectOpnorm => "rect_opnorm",
            Self::GramDeviation => "gram_deviation",
            Self::VaNorm => "vA_norm",
        }
    }

    /// Exponent the theory predicts for `n`.
    pub fn expected_slope(&self) -> f64 {
        match self {
            Self::TitiCenteredNorm | Self::GramDeviation => 1.5,
            Self::RectOpnorm => 1.0,
            Self::SquareOpnorm | Self::VaNorm => 0.5,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|st| st.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| LabError::Invalid(format!("unknown statistic `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationPoint {
    pub n: usize,
    pub norms: Vec<f64>,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRecord {
    pub statistic: Statistic,
    pub repetitions: usize,
    pub points: Vec<ConcentrationPoint>,
    /// Fit over every (n, repetition) pair.
    pub fit: LogLogFit,
}

#[derive(Debug, Clone)]
pub struct ConcentrationOptions {
    /// Power steps on the normal operator for the tensor statistic.
    pub power_steps: usize,
}

impl Default for ConcentrationOptions {
    fn default() -> Self {
        Self { power_steps: 30 }
    }
}

fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Array2<f64> {
    let mut r = rng::stream(seed, ids::NOISE);
    Array2::from_shape_vec((rows, cols), rng::gaussian_vec(&mut r, rows * cols)).expect("rows·cols draws")
}

fn largest_abs_eig(m: &Array2<f64>) -> Result<f64> {
    let spec = dense_eig_oracle(m)?;
    Ok(spec.values.iter().fold(0.0_f64, |a, x| a.max(x.abs())))
}

fn opnorm(a: &Array2<f64>) -> Result<f64> {
    let gram = if a.nrows() >= a.ncols() { a.t().dot(a) } else { a.dot(&a.t()) };
    Ok(largest_abs_eig(&gram)?.sqrt())
}

/// One draw of the statistic at dimension `n`.
pub fn measure(statistic: Statistic, n: usize, seed: u64, opts: &ConcentrationOptions) -> Result<f64> {
    let nf = n as f64;
    Ok(match statistic {
        Statistic::TitiCenteredNorm => {
            let mut r = rng::stream(seed, ids::NOISE);
            let a = DenseTensor::from_vec(3, n, rng::gaussian_vec(&mut r, n * n * n))?;
            let op = op_titi(&a, true)?;
            let power = PowerOptions { max_iter: Some(opts.power_steps), ..PowerOptions::seeded(seed) };
            top_singular_value(&op, &power)?.value / nf.ln().sqrt()
        }
        Statistic::SquareOpnorm => opnorm(&gaussian_matrix(n, n, seed))?,
        Statistic::RectOpnorm => opnorm(&gaussian_matrix(n * n, n, seed))?,
        Statistic::GramDeviation => {
            let a = gaussian_matrix(n * n, n, seed);
            let dev = a.t().dot(&a) - Array2::<f64>::eye(n) * (nf * nf);
            largest_abs_eig(&dev)?
        }
        Statistic::VaNorm => {
            let a = gaussian_matrix(n, n * n, seed);
            let v = rng::unit_vector(&mut rng::stream(seed, ids::SIGNAL), n);
            let combo: Array1<f64> = v.dot(&a);
            opnorm(&combo.into_shape_with_order((n, n)).expect("n² entries"))?
        }
    })
}

/// Draws `reps` instances per `n` and fits the log-log slope. Trial seeds are
/// `derive_seed(seed, [statistic, n, rep])`.
pub fn run_concentration(
    statistic: Statistic,
    n_list: &[usize],
    reps: usize,
    seed: u64,
    opts: &ConcentrationOptions,
) -> Result<ConcentrationRecord> {
    if n_list.len() < 5 || reps == 0 {
        return Err(LabError::Invalid("a slope fit needs at least five sizes and one repetition".into()));
    }
    use rayon::prelude::*;
    let tag = Statistic::ALL.iter().position(|s| *s == statistic).expect("listed") as u64;
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let norms = (0..reps)
            .into_par_iter()
            .map(|rep| measure(statistic, n, derive_seed(seed, &[tag, n as u64, rep as u64]), opts))
            .collect::<Result<Vec<f64>>>()?;
        points.push(ConcentrationPoint { n, mean: mean(&norms), norms });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        points.iter().flat_map(|p| p.norms.iter().map(move |&y| (p.n as f64, y))).unzip();
    let fit = loglog_fit(&xs, &ys);
    Ok(ConcentrationRecord { statistic, repetitions: reps, points, fit })
}
