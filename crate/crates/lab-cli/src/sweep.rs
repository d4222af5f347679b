use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use ndarray::ArrayView1;
use rayon::prelude::*;
use recovery::{
    apply_semirandom, certify_titi, recover_symmetric, recover_titi, recover_unfold, CertifyOptions,
    RecoveryOptions, RecoveryReport, SemiRandomAdversary, ShiftRule,
};
use serde::{Deserialize, Serialize};
use sos_moment_sdp::{certify_sdp, round_sdp, solve_moment_sdp, SdpCertifyOptions, SdpOptions};
use tensor_core::rng::derive_seed;
use tensor_core::{NoiseKind, SpikedInstance};

use crate::stats::median;
use crate::{LabError, Result, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgoId {
    Unfold,
    UnfoldNaive,
    Titi,
    Symmetric,
    Sdp,
    CertifyTiti,
    CertifySdp,
}

impl AlgoId {
    pub const ALL: [AlgoId; 7] =
        [Self::Unfold, Self::UnfoldNaive, Self::Titi, Self::Symmetric, Self::Sdp, Self::CertifyTiti, Self::CertifySdp];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Unfold => "unfold",
            Self::UnfoldNaive => "unfold_naive",
            Self::Titi => "titi",
            Self::Symmetric => "symmetric",
            Self::Sdp => "sdp",
            Self::CertifyTiti => "certify_titi",
            Self::CertifySdp => "certify_sdp",
        }
    }
}

impl fmt::Display for AlgoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgoId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == s).ok_or_else(|| LabError::Invalid(format!("unknown algorithm `{s}`")))
    }
}

/// Noise model of a sweep cell; `Whitened` applies the whitening adversary to iid noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSpec {
    Iid,
    Symmetric,
    Whitened,
    Zero,
}

impl FromStr for NoiseSpec {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(Self::Iid),
            "symmetric" => Ok(Self::Symmetric),
            "whitened" | "semirandom" => Ok(Self::Whitened),
            "zero" => Ok(Self::Zero),
            _ => Err(LabError::Invalid(format!("unknown noise `{s}`"))),
        }
    }
}

/// `τ = multiplier·n^{k/4}`.
pub fn tau_for(n: usize, k: usize, multiplier: f64) -> f64 {
    multiplier * (n as f64).powf(k as f64 / 4.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub tau_multiplier: Vec<f64>,
    pub noise: Vec<NoiseSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub algorithm: AlgoId,
    pub grid: Grid,
    pub trials: usize,
    pub seed: u64,
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algo: AlgoId,
    pub n: usize,
    pub k: usize,
    pub tau: f64,
    pub noise: NoiseSpec,
    pub completed: usize,
    pub failures: Vec<String>,
    pub corr_sq_median: Option<f64>,
    pub corr_sq_q10: Option<f64>,
    pub corr_sq_q90: Option<f64>,
    pub matvecs_median: Option<f64>,
    pub time_ms_median: Option<f64>,
    pub certify_rate: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub cells: Vec<CellSummary>,
}

/// The instance of one trial: the noise kind and seed fully determine it.
pub fn trial_instance(n: usize, k: usize, tau: f64, noise: NoiseSpec, seed: u64) -> Result<SpikedInstance> {
    let kind = if noise == NoiseSpec::Symmetric { NoiseKind::SymmetricGaussian } else { NoiseKind::IidGaussian };
    let mut opts = tensor_core::GenOptions::new(n, k, tau, kind, seed);
    opts.zero_noise = noise == NoiseSpec::Zero;
    let inst = tensor_core::gen_spiked_with(&opts)?;
    Ok(if noise == NoiseSpec::Whitened {
        let adv = SemiRandomAdversary::whitening(&inst.tensor)?;
        apply_semirandom(&inst, &adv)?
    } else {
        inst
    })
}

fn recovery_record(algo: AlgoId, inst: &SpikedInstance, seed: u64, rep: RecoveryReport) -> TrialRecord {
    let rep = rep.with_truth(inst.v0.view());
    TrialRecord {
        algo: algo.as_str().into(),
        n: inst.n(),
        k: inst.order(),
        tau: inst.tau,
        seed,
        correlation: rep.correlation,
        corr_sq: rep.corr_sq,
        matvecs: rep.matvecs,
        time_ms: rep.wall_ms(),
        verdict: None,
        lambda_cert: None,
    }
}

/// Runs one algorithm on one instance.
pub fn run_trial(algo: AlgoId, inst: &SpikedInstance, seed: u64) -> Result<TrialRecord> {
    let ropts = RecoveryOptions::seeded(seed);
    let t = &inst.tensor;
    Ok(match algo {
        AlgoId::Unfold => recovery_record(algo, inst, seed, recover_unfold(t, &ropts)?),
        AlgoId::UnfoldNaive => recovery_record(algo, inst, seed, recover_unfold(t, &ropts.with_shift(ShiftRule::None))?),
        AlgoId::Titi => recovery_record(algo, inst, seed, recover_titi(t, &ropts)?),
        AlgoId::Symmetric => recovery_record(algo, inst, seed, recover_symmetric(t, &ropts)?),
        AlgoId::Sdp => {
            let start = Instant::now();
            let sol = solve_moment_sdp(t, None, &SdpOptions::default())?;
            let iterations = sol.iterations;
            let mut rep = round_sdp(&sol)?;
            rep.matvecs = iterations;
            rep.wall_time = start.elapsed();
            recovery_record(algo, inst, seed, rep)
        }
        AlgoId::CertifyTiti | AlgoId::CertifySdp => {
            let rec = recover_titi(t, &ropts)?.with_truth(inst.v0.view());
            let v: ArrayView1<f64> = rec.v.view();
            let cert = if algo == AlgoId::CertifyTiti {
                certify_titi(t, v, &CertifyOptions::seeded(seed))?
            } else {
                certify_sdp(t, v, &SdpCertifyOptions::default())?
            };
            TrialRecord {
                algo: algo.as_str().into(),
                n: inst.n(),
                k: inst.order(),
                tau: inst.tau,
                seed,
                correlation: rec.correlation,
                corr_sq: rec.corr_sq,
                matvecs: rec.matvecs + cert.matvecs,
                time_ms: (rec.wall_time + cert.wall_time).as_secs_f64() * 1e3,
                verdict: Some(cert.verdict.as_str().into()),
                lambda_cert: Some(cert.lambda_cert),
            }
        }
    })
}

fn summarize(algo: AlgoId, n: usize, k: usize, tau: f64, noise: NoiseSpec, done: &[TrialRecord], failures: Vec<String>) -> CellSummary {
    let pick = |f: fn(&TrialRecord) -> Option<f64>| -> Vec<f64> { done.iter().filter_map(f).collect() };
    let q = |xs: &[f64], p: f64| (!xs.is_empty()).then(|| recovery::quantile(xs, p));
    let corr = pick(|r| r.corr_sq);
    let matvecs: Vec<f64> = done.iter().map(|r| r.matvecs as f64).collect();
    let times: Vec<f64> = done.iter().map(|r| r.time_ms).collect();
    let verdicts: Vec<bool> = done.iter().filter_map(|r| r.verdict.as_deref().map(|v| v == "certify")).collect();
    CellSummary {
        algo,
        n,
        k,
        tau,
        noise,
        completed: done.len(),
        failures,
        corr_sq_median: q(&corr, 0.5),
        corr_sq_q10: q(&corr, 0.1),
        corr_sq_q90: q(&corr, 0.9),
        matvecs_median: (!matvecs.is_empty()).then(|| median(&matvecs)),
        time_ms_median: (!times.is_empty()).then(|| median(&times)),
        certify_rate: (!verdicts.is_empty())
            .then(|| verdicts.iter().filter(|&&b| b).count() as f64 / verdicts.len() as f64),
    }
}

/// Runs every cell of the grid. Trial seeds are `derive_seed(seed, [n, k, multiplier index,
/// noise index, trial])`; a failing trial is recorded in its cell and the sweep continues.
pub fn run_phase_sweep(manifest: &ExperimentManifest) -> Result<SweepOutput> {
    let g = &manifest.grid;
    let mut records = Vec::new();
    let mut cells = Vec::new();
    for &n in &g.n {
        for &k in &g.k {
            for (mi, &mult) in g.tau_multiplier.iter().enumerate() {
                for (ni, &noise) in g.noise.iter().enumerate() {
                    let tau = tau_for(n, k, mult);
                    let results: Vec<std::result::Result<TrialRecord, String>> = (0..manifest.trials)
                        .into_par_iter()
                        .map(|trial| {
                            let seed = derive_seed(manifest.seed, &[n as u64, k as u64, mi as u64, ni as u64, trial as u64]);
                            trial_instance(n, k, tau, noise, seed)
                                .and_then(|inst| run_trial(manifest.algorithm, &inst, seed))
                                .map_err(|e| format!("seed {seed}: {e}"))
                        })
                        .collect();
                    let mut done = Vec::new();
                    let mut failures = Vec::new();
                    for r in results {
                        match r {
                            Ok(rec) => done.push(rec),
                            Err(e) => failures.push(e),
                        }
                    }
                    cells.push(summarize(manifest.algorithm, n, k, tau, noise, &done, failures));
                    records.extend(done);
                }
            }
        }
    }
    Ok(SweepOutput { records, cells })
}
