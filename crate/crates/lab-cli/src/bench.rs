use std::time::Instant;

use ndarray::Array1;
use serde::{Deserialize, Serialize};
use spectral_ops::{op_gram, op_titi, LinearOperator};
use tensor_core::rng::{self, derive_seed, ids};
use tensor_core::DenseTensor;

use crate::stats::{mean, median};
use crate::svg::{line_plot, Series};
use crate::sweep::{run_trial, tau_for, trial_instance, AlgoId, NoiseSpec};
use crate::{LabError, Result, TrialRecord};

/// Algorithms compared in the matvec benchmark.
pub const BENCH_ALGOS: [AlgoId; 3] = [AlgoId::Titi, AlgoId::Unfold, AlgoId::UnfoldNaive];

/// Largest dimension the benchmark accepts (the titi operator is n⁴ per matvec).
pub const BENCH_MAX_N: usize = 400;

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub n: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// `τ = multiplier·n^{3/4}`.
    pub tau_multiplier: f64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { n: vec![200], trials: 10, seed: 0, tau_multiplier: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub algo: AlgoId,
    pub n: usize,
    pub matvecs_mean: f64,
    pub matvecs_sd: f64,
    pub time_ms_median: f64,
    /// Median over trials of wall time per matvec.
    pub ms_per_matvec: f64,
    pub corr_sq_median: f64,
}

/// Directly timed operator applications at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorCost {
    pub n: usize,
    pub titi_ms: f64,
    pub gram_ms: f64,
}

impl OperatorCost {
    pub fn ratio(&self) -> f64 {
        self.titi_ms / self.gram_ms
    }
}

#[derive(Debug, Clone)]
pub struct BenchOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<BenchSummary>,
    pub operators: Vec<OperatorCost>,
}

impl BenchOutput {
    pub fn get(&self, algo: AlgoId, n: usize) -> Option<&BenchSummary> {
        self.summary.iter().find(|s| s.algo == algo && s.n == n)
    }

    /// Mean matvecs against `n`, one line per algorithm, with ±1 sd bars.
    pub fn svg(&self) -> String {
        let series: Vec<Series> = BENCH_ALGOS
            .iter()
            .map(|&algo| Series {
                label: algo.as_str().into(),
                points: self
                    .summary
                    .iter()
                    .filter(|s| s.algo == algo)
                    .map(|s| (s.n as f64, s.matvecs_mean, s.matvecs_sd))
                    .collect(),
            })
            .collect();
        line_plot("Matrix-vector products to convergence", "n", "matvecs", &series)
    }
}

fn median_ms(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

/// Median wall time of one `Σ T_i⊗T_i` product and one `U Uᵀ` product on random vectors.
pub fn time_operators(t: &DenseTensor, reps: usize, seed: u64) -> Result<OperatorCost> {
    let n = t.dim();
    let mut r = rng::stream(seed, ids::PROBE);
    let titi = op_titi(t, false)?;
    let gram = op_gram(t)?;
    let x2 = Array1::from(rng::gaussian_vec(&mut r, n * n));
    let x1 = Array1::from(rng::gaussian_vec(&mut r, n));
    let titi_ms = median_ms(reps, || {
        std::hint::black_box(titi.apply(x2.view()));
    });
    // The small product is repeated so that timer resolution does not matter.
    let inner = 20;
    let gram_ms = median_ms(reps, || {
        for _ in 0..inner {
            std::hint::black_box(gram.apply(x1.view()));
        }
    }) / inner as f64;
    Ok(OperatorCost { n, titi_ms, gram_ms })
}

/// Runs each benchmark algorithm on the same instances; trial seeds are
/// `derive_seed(seed, [n, trial])`, so the three algorithms see identical tensors.
pub fn run_benchmark(opts: &BenchOptions) -> Result<BenchOutput> {
    if let Some(&n) = opts.n.iter().find(|&&n| n > BENCH_MAX_N) {
        return Err(LabError::Invalid(format!("n = {n} exceeds the benchmark cap {BENCH_MAX_N}")));
    }
    let mut records = Vec::new();
    let mut summary = Vec::new();
    let mut operators = Vec::new();
    for &n in &opts.n {
        let tau = tau_for(n, 3, opts.tau_multiplier);
        let mut by_algo: Vec<Vec<TrialRecord>> = vec![Vec::new(); BENCH_ALGOS.len()];
        for trial in 0..opts.trials {
            let seed = derive_seed(opts.seed, &[n as u64, trial as u64]);
            let inst = trial_instance(n, 3, tau, NoiseSpec::Iid, seed)?;
            if trial == 0 {
                operators.push(time_operators(&inst.tensor, 5, seed)?);
            }
            for (slot, &algo) in BENCH_ALGOS.iter().enumerate() {
                by_algo[slot].push(run_trial(algo, &inst, seed)?);
            }
        }
        for (slot, &algo) in BENCH_ALGOS.iter().enumerate() {
            let rs = &by_algo[slot];
            let mv: Vec<f64> = rs.iter().map(|r| r.matvecs as f64).collect();
            let m = mean(&mv);
            let sd = if mv.len() > 1 {
                (mv.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (mv.len() - 1) as f64).sqrt()
            } else {
                0.0
            };
            let times: Vec<f64> = rs.iter().map(|r| r.time_ms).collect();
            let per: Vec<f64> = rs.iter().map(|r| r.time_ms / r.matvecs.max(1) as f64).collect();
            let corr: Vec<f64> = rs.iter().filter_map(|r| r.corr_sq).collect();
            summary.push(BenchSummary {
                algo,
                n,
                matvecs_mean: m,
                matvecs_sd: sd,
                time_ms_median: median(&times),
                ms_per_matvec: median(&per),
                corr_sq_median: median(&corr),
            });
        }
        // Trial-major order keeps rows of one instance together.
        for trial in 0..opts.trials {
            for rs in &by_algo {
                records.push(rs[trial].clone());
            }
        }
    }
    Ok(BenchOutput { records, summary, operators })
}
