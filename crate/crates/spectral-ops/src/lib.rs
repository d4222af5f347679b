//! Matrix-free operators and the eigensolvers built on them.

mod dense;
mod error;
mod operator;
mod power;
mod tensor_ops;

pub use dense::{dense_eig_oracle, dense_eig_oracle_capped, is_psd, min_eigenvalue, Spectrum, DEFAULT_DENSE_CAP};
pub use error::{Result, SpectralError};
pub use operator::{max_asymmetry, materialize, DenseOp, LinearOperator, NormalOp, SymmetricPart, Transpose};
pub use power::{default_max_iter, top_singular_shifted, top_singular_value, EigReport, PowerOptions};
pub use tensor_ops::{op_gram, op_titi, GramOp, TitiOp};
