//! Degree-4 moment matrices over `{‖x‖² = 1}` and a projection-based solver for the
//! moment relaxation of `max T(x)`.

mod basis;
mod certify;
mod error;
mod moment;
mod round;
mod solver;

pub use basis::{MonomialBasis, ReducedBasis};
pub use certify::{calibrate_sdp, certify_sdp, sdp_scale, SdpCertifyOptions};
pub use error::{Result, SdpError};
pub use moment::{MomentMatrix, Tuple};
pub use round::round_sdp;
pub use solver::{moment_map, solve_moment_sdp, MomentMap, RankOneShift, SdpOptions, SdpSolution};
