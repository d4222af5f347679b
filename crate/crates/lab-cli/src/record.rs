use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::Result;

pub const CSV_HEADER: [&str; 11] =
    ["algo", "n", "k", "tau", "seed", "correlation", "corr_sq", "matvecs", "time_ms", "verdict", "lambda_cert"];

/// One trial of one algorithm. `seed` alone replays the trial: every random stream is derived
/// from it with a fixed id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub tau: f64,
    pub seed: u64,
    pub correlation: Option<f64>,
    pub corr_sq: Option<f64>,
    pub matvecs: usize,
    pub time_ms: f64,
    pub verdict: Option<String>,
    pub lambda_cert: Option<f64>,
}

pub fn write_csv<W: Write>(w: W, records: &[TrialRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if records.is_empty() {
        out.write_record(CSV_HEADER)?;
    }
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
