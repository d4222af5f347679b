//! Seeded, splittable random streams.
//!
//! Every stochastic step draws from `stream(seed, id)`: a ChaCha8 generator keyed by
//! `seed` on the stream `id`. Recording the pair is enough to replay the step.

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type StreamRng = ChaCha8Rng;

/// Stream ids used across the workspace.
pub mod ids {
    pub const SIGNAL: u64 = 1;
    pub const NOISE: u64 = 2;
    pub const POWER_START: u64 = 3;
    pub const ROTATION: u64 = 4;
    pub const PARTITION: u64 = 5;
    pub const PROBE: u64 = 6;
    pub const SPOT_CHECK: u64 = 7;
}

pub fn stream(seed: u64, id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Derives a child seed from a base seed and a path of labels (splitmix64 mixing).
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut h = splitmix(base ^ 0x6a09_e667_f3bc_c908);
    for &p in path {
        h = splitmix(h ^ splitmix(p.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn gaussian_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform point on the unit sphere in `R^n`.
pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Array1<f64> {
    loop {
        let v = Array1::from(gaussian_vec(rng, n));
        let norm = v.dot(&v).sqrt();
        if norm > 1e-300 {
            return v / norm;
        }
    }
}
