use std::path::Path;

use pseudo_moments::{calibrate_preconditions, PreconditionTable};
use recovery::{calibrate_titi, CalibrationTable};
use sos_moment_sdp::{calibrate_sdp, SdpOptions};

use crate::Result;

#[derive(Debug, Clone)]
pub struct CalibrateOptions {
    pub titi_n: Vec<usize>,
    pub sdp_n: Vec<usize>,
    pub lb3_n: Vec<usize>,
    pub lb4_n: Vec<usize>,
    pub reps: usize,
    /// Draws per size for the (much slower) precondition statistics.
    pub lb_reps: usize,
    pub quantile: f64,
    pub seed: u64,
}

impl Default for CalibrateOptions {
    fn default() -> Self {
        Self {
            titi_n: vec![10, 20, 30, 50, 75, 100],
            sdp_n: vec![4, 5, 6, 8, 10],
            lb3_n: vec![20, 30, 40],
            lb4_n: vec![15, 20, 25],
            reps: 200,
            lb_reps: 40,
            quantile: 0.99,
            seed: 20261019,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CalibrationBundle {
    pub titi: Option<CalibrationTable>,
    pub sdp: Option<CalibrationTable>,
    pub preconditions: Option<PreconditionTable>,
}

/// Pure-noise quantiles for both certificates and the lower-bound precondition limits. Empty
/// size lists skip the corresponding table.
pub fn calibrate_thresholds(opts: &CalibrateOptions) -> Result<CalibrationBundle> {
    let titi = (!opts.titi_n.is_empty())
        .then(|| calibrate_titi(&opts.titi_n, opts.reps, opts.seed, opts.quantile))
        .transpose()?;
    let sdp = (!opts.sdp_n.is_empty())
        .then(|| calibrate_sdp(&opts.sdp_n, opts.reps, opts.seed, opts.quantile, &SdpOptions::default()))
        .transpose()?;
    let preconditions = (!opts.lb3_n.is_empty() && !opts.lb4_n.is_empty())
        .then(|| calibrate_preconditions(&opts.lb3_n, &opts.lb4_n, opts.lb_reps, opts.seed))
        .transpose()?;
    Ok(CalibrationBundle { titi, sdp, preconditions })
}

impl CalibrationBundle {
    /// Writes `titi_calibration.json`, `sdp_calibration.json` and `lb_preconditions.json`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        if let Some(t) = &self.titi {
            std::fs::write(dir.join("titi_calibration.json"), t.to_json()?)?;
        }
        if let Some(t) = &self.sdp {
            std::fs::write(dir.join("sdp_calibration.json"), t.to_json()?)?;
        }
        if let Some(t) = &self.preconditions {
            t.save(&dir.join("lb_preconditions.json"))?;
        }
        Ok(())
    }
}
