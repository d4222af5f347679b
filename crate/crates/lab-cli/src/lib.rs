//! Experiment orchestration for the spiked tensor algorithms: sweeps, concentration fits,
//! matvec benchmarks and threshold calibration, with CSV and SVG output.

pub mod bench;
pub mod calibrate;
pub mod concentration;
mod error;
pub mod record;
pub mod stats;
pub mod svg;
pub mod sweep;

pub use error::{LabError, Result};
pub use record::{write_csv, TrialRecord, CSV_HEADER};
