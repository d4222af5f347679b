use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::Rng;
use spectral_ops::{top_singular_shifted, LinearOperator};
use tensor_core::rng::{self, derive_seed, ids};
use tensor_core::DenseTensor;

use crate::linalg::{normalize, random_orthogonal};
use crate::{Algorithm, RecoveryError, RecoveryOptions, RecoveryReport, Result};

const PARTITION_ATTEMPTS: usize = 16;

/// Random rotation and a three-way partition of the coordinates.
#[derive(Debug, Clone)]
pub struct SymmetricRecoveryPlan {
    pub rotation: Array2<f64>,
    /// Coordinate lists of the blocks X, Y, Z, each sorted.
    pub blocks: [Vec<usize>; 3],
}

impl SymmetricRecoveryPlan {
    pub fn draw(n: usize, seed: u64) -> Result<Self> {
        let rotation = random_orthogonal(n, &mut rng::stream(seed, ids::ROTATION));
        let mut part_rng = rng::stream(seed, ids::PARTITION);
        for _ in 0..PARTITION_ATTEMPTS {
            let mut blocks: [Vec<usize>; 3] = Default::default();
            for i in 0..n {
                blocks[part_rng.random_range(0..3)].push(i);
            }
            if blocks.iter().all(|b| !b.is_empty()) {
                return Ok(Self { rotation, blocks });
            }
        }
        Err(RecoveryError::DegeneratePartition(PARTITION_ATTEMPTS))
    }

    pub fn n(&self) -> usize {
        self.rotation.nrows()
    }

    /// Diagonal of the 0/1 projector onto block `b`.
    pub fn projector(&self, b: usize) -> Array1<f64> {
        let mut p = Array1::zeros(self.n());
        for &i in &self.blocks[b] {
            p[i] = 1.0;
        }
        p
    }

    /// `Rᵀ P R`.
    fn conjugated_projector(&self, b: usize) -> Array2<f64> {
        let rows = self.rotation.select(ndarray::Axis(0), &self.blocks[b]);
        rows.t().dot(&rows)
    }

    /// Largest deviation of `RᵀR` from the identity, and whether the blocks partition `[n]`.
    pub fn check(&self) -> (f64, bool) {
        let n = self.n();
        let rtr = self.rotation.t().dot(&self.rotation);
        let dev = (&rtr - &Array2::<f64>::eye(n)).iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let mut seen = vec![0u8; n];
        for b in &self.blocks {
            for &i in b {
                seen[i] += 1;
            }
        }
        (dev, seen.iter().all(|&c| c == 1))
    }
}

/// `x ↦ P_X R G (K_Y ⊗ K_Z) Gᵀ Rᵀ P_X x` restricted to the coordinates of block X,
/// where `G` is the n×n² flattening of `T` and `K_B = Rᵀ P_B R`.
pub struct BlockOp<'a> {
    g: ArrayView2<'a, f64>,
    rotation: &'a Array2<f64>,
    ky: Array2<f64>,
    kz: Array2<f64>,
    coords: &'a [usize],
}

impl<'a> BlockOp<'a> {
    pub fn new(t: &'a DenseTensor, plan: &'a SymmetricRecoveryPlan, block: usize) -> Result<Self> {
        if t.order() != 3 {
            return Err(RecoveryError::Order { expected: "3", got: t.order() });
        }
        if t.dim() != plan.n() {
            return Err(RecoveryError::DimensionMismatch { expected: plan.n(), got: t.dim() });
        }
        let (y, z) = ((block + 1) % 3, (block + 2) % 3);
        Ok(Self {
            g: t.matrix(1),
            rotation: &plan.rotation,
            ky: plan.conjugated_projector(y),
            kz: plan.conjugated_projector(z),
            coords: &plan.blocks[block],
        })
    }

    pub fn embed(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let mut z = Array1::zeros(self.rotation.nrows());
        for (&i, &v) in self.coords.iter().zip(x.iter()) {
            z[i] = v;
        }
        z
    }
}

impl LinearOperator for BlockOp<'_> {
    fn dim(&self) -> usize {
        self.coords.len()
    }

    fn apply(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let n = self.rotation.nrows();
        let y1 = self.rotation.t().dot(&self.embed(x));
        let y2 = self.g.t().dot(&y1).into_shape_with_order((n, n)).expect("n² vector");
        let y3 = self.ky.dot(&y2).dot(&self.kz);
        let y4 = self.g.dot(&y3.into_shape_with_order(n * n).expect("contiguous"));
        let y5 = self.rotation.dot(&y4);
        Array1::from_iter(self.coords.iter().map(|&i| y5[i]))
    }

    fn is_symmetric(&self) -> bool {
        true
    }

    fn cost_hint(&self) -> f64 {
        let n = self.rotation.nrows() as f64;
        8.0 * n * n * n
    }
}

/// Per-block top eigenvectors, embedded in `R^n` (rotated coordinates).
#[derive(Debug, Clone)]
pub struct SymmetricBlocks {
    pub vectors: [Array1<f64>; 3],
    pub matvecs: usize,
    pub iterations: usize,
    pub converged: bool,
    pub shifts: [f64; 3],
}

pub fn symmetric_blocks(t: &DenseTensor, plan: &SymmetricRecoveryPlan, opts: &RecoveryOptions) -> Result<SymmetricBlocks> {
    let mut vectors: [Array1<f64>; 3] = Default::default();
    let mut shifts = [0.0; 3];
    let (mut matvecs, mut iterations, mut converged) = (0, 0, true);
    for b in 0..3 {
        let op = BlockOp::new(t, plan, b)?;
        let (y, z) = (plan.blocks[(b + 1) % 3].len(), plan.blocks[(b + 2) % 3].len());
        shifts[b] = opts.shift.resolve(t, (y * z) as f64);
        let rep = top_singular_shifted(&op, shifts[b], &opts.power(derive_seed(opts.seed, &[b as u64])))?;
        matvecs += rep.matvecs;
        iterations += rep.iterations;
        converged &= rep.converged;
        vectors[b] = op.embed(rep.vector.view());
    }
    Ok(SymmetricBlocks { vectors, matvecs, iterations, converged, shifts })
}

/// Rotated, partitioned recovery for tensors with symmetric noise.
pub fn recover_symmetric(t: &DenseTensor, opts: &RecoveryOptions) -> Result<RecoveryReport> {
    if t.order() != 3 {
        return Err(RecoveryError::Order { expected: "3", got: t.order() });
    }
    let start = Instant::now();
    let plan = SymmetricRecoveryPlan::draw(t.dim(), opts.seed)?;
    let blocks = symmetric_blocks(t, &plan, opts)?;
    let [vx, vy, vz] = &blocks.vectors;

    // Block signs are arbitrary; keep the combination with the largest cubic form.
    let mut best: Option<(f64, Array1<f64>)> = None;
    for (sy, sz) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let w = vx + &(vy * sy) + &(vz * sz);
        let mut v = normalize(plan.rotation.t().dot(&w));
        let mut value = t.eval_poly(v.view())?;
        if value < 0.0 {
            v.mapv_inplace(|x| -x);
            value = -value;
        }
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            best = Some((value, v));
        }
    }
    let (_, v) = best.expect("four candidates");
    Ok(RecoveryReport {
        algorithm: Algorithm::Symmetric,
        v,
        inner: None,
        correlation: None,
        corr_sq: None,
        matvecs: blocks.matvecs,
        iterations: blocks.iterations,
        converged: blocks.converged,
        wall_time: start.elapsed(),
        shift: blocks.shifts[0],
        sign_identifiable: true,
        seed: opts.seed,
        streams: vec![ids::ROTATION, ids::PARTITION, ids::POWER_START],
    })
}
