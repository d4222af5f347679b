//! Dense order-k tensors and the spiked tensor model.
//!
//! Storage is row-major over multi-indices `(i_0, ..., i_{k-1})`. Modes are
//! 0-based throughout. Slices run along mode 0: `slice(i)[j][l] = T[i][j][l]`.

// Links the BLAS backend used by ndarray's matrix products.
extern crate blas_src;

mod error;
pub mod gram;
pub mod io;
mod permutation;
pub mod rng;
mod spiked;
mod tensor;
mod unfold;

pub use error::{Result, TensorError};
pub use gram::expected_gram;
pub use permutation::Permutation;
pub use spiked::{gen_spiked, gen_spiked_with, GenOptions, NoiseKind, SpikedInstance};
pub use tensor::{DenseTensor, DEFAULT_MAX_ENTRIES};
pub use unfold::Unfolding;
