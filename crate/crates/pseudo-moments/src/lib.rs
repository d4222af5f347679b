//! Degree-4 pseudo-expectations on the sphere: uniform moments, maximal symmetrization, the
//! symmetric Schur extension, sphere correction, mixing, verification and the lower-bound
//! constructions for random cubic and quartic forms.

mod error;
mod lower_bound;
mod pe;
mod schur;
mod spectrum;
mod sphere;
mod symmetry;
mod uniform;
mod verify;

pub use error::{PseudoError, Result};
pub use lower_bound::{
    build_lb_deg3, build_lb_deg4, calibrate_preconditions, deg3_lambda, deg4_lambda, or_uniform, LbConfig,
    PreconditionReport, PreconditionTable, SHIPPED_PRECONDITIONS,
};
pub use pe::{ConstructionParams, Provenance, PseudoExpectation};
pub use schur::{extend_matrix, schur_extend, SchurExtension, T_CAP};
pub use spectrum::{lambda_min_functional, mix_uniform, mixing_weight};
pub use sphere::{sphere_correct, SphereCorrectionReport};
pub use symmetry::{identity_orbit, pi_conjugate, reduce_pairs, sigma, sym_project};
pub use uniform::{uniform_matrix, uniform_moments, uniform_value};
pub use verify::{verify_pe, Check, VerifyReport, VerifyTolerances, Violation};
