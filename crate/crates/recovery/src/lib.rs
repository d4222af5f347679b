//! Recovery of the planted vector in a spiked tensor, spectral certification of the
//! residual, and the semi-random row adversary.

mod calibration;
mod certify;
mod error;
mod linalg;
mod noise;
mod report;
mod semirandom;
mod symmetric;
mod titi;
mod unfold;

pub use calibration::{calibrate_titi, certificate_scale, pure_noise_statistics, quantile, CalibrationEntry, CalibrationTable};
pub use certify::{certificate_lambda, certify_titi, spot_check, CertifyOptions, SpotCheck, DEFAULT_CERT_STEPS};
pub use error::{RecoveryError, Result};
pub use linalg::{random_orthogonal, top_left_singular};
pub use noise::{noise_variance, ShiftRule};
pub use report::{Algorithm, CertificateReport, RecoveryOptions, RecoveryReport, Verdict};
pub use semirandom::{apply_semirandom, AdversaryMode, SemiRandomAdversary};
pub use symmetric::{recover_symmetric, symmetric_blocks, BlockOp, SymmetricBlocks, SymmetricRecoveryPlan};
pub use titi::recover_titi;
pub use unfold::recover_unfold;
