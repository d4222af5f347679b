//! Binary tensor files and their JSON sidecars.
//!
//! Layout: 12-byte magic, little-endian u32 format version, u32 order, u32 dimension,
//! then `dim^order` little-endian f64 values. Square matrices use order 2.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::{DenseTensor, NoiseKind, Result, SpikedInstance, TensorError};

pub const MAGIC: &[u8; 12] = b"SPIKEDTENSOR";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Sidecar {
    pub tau: f64,
    pub v0: Vec<f64>,
    pub noise_kind: NoiseKind,
    pub seed: u64,
}

pub fn write_tensor(w: &mut impl Write, t: &DenseTensor) -> Result<()> {
    write_raw(w, t.order() as u32, t.dim() as u32, t.as_slice())
}

fn write_raw(w: &mut impl Write, order: u32, dim: u32, data: &[f64]) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&order.to_le_bytes())?;
    w.write_all(&dim.to_le_bytes())?;
    let mut buf = Vec::with_capacity(data.len() * 8);
    for x in data {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_tensor(r: &mut impl Read) -> Result<DenseTensor> {
    let mut magic = [0u8; 12];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(TensorError::Format("bad magic".into()));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(TensorError::Format(format!("unsupported version {version}")));
    }
    let order = read_u32(r)? as usize;
    let dim = read_u32(r)? as usize;
    let len = crate::tensor::checked_len(order, dim, crate::DEFAULT_MAX_ENTRIES)?;
    let mut bytes = vec![0u8; len * 8];
    r.read_exact(&mut bytes)?;
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    DenseTensor::from_vec(order, dim, data)
}

pub fn write_matrix(w: &mut impl Write, m: &Array2<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(TensorError::InvalidDimensions(format!("matrix {}x{} is not square", m.nrows(), m.ncols())));
    }
    let data: Vec<f64> = m.iter().copied().collect();
    write_raw(w, 2, m.nrows() as u32, &data)
}

pub fn read_matrix(r: &mut impl Read) -> Result<Array2<f64>> {
    let t = read_tensor(r)?;
    if t.order() != 2 {
        return Err(TensorError::Format(format!("expected order 2, found {}", t.order())));
    }
    let n = t.dim();
    Ok(Array2::from_shape_vec((n, n), t.into_vec()).expect("square"))
}

/// Writes `<path>` and the sidecar `<path>.json`.
pub fn save_instance(path: &Path, inst: &SpikedInstance) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_tensor(&mut f, &inst.tensor)?;
    f.flush()?;
    let side = Sidecar { tau: inst.tau, v0: inst.v0.to_vec(), noise_kind: inst.noise_kind, seed: inst.seed };
    std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)?)?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<SpikedInstance> {
    let tensor = read_tensor(&mut std::io::BufReader::new(std::fs::File::open(path)?))?;
    let side: Sidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path(path))?)?;
    if side.v0.len() != tensor.dim() {
        return Err(TensorError::DimensionMismatch { expected: tensor.dim(), got: side.v0.len() });
    }
    Ok(SpikedInstance {
        tensor,
        tau: side.tau,
        v0: Array1::from(side.v0),
        noise_kind: side.noise_kind,
        seed: side.seed,
    })
}

pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    s.into()
}
