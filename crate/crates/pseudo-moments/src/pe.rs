use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sos_moment_sdp::MomentMatrix;

use crate::{PreconditionReport, Result, SphereCorrectionReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Uniform,
    LbDeg3,
    LbDeg4,
    Sdp,
    Custom,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// Scale of the planted moments (`1/λ` for degree 3, `1/λ²` for degree 4).
    pub epsilon: Option<f64>,
    pub lambda: Option<f64>,
    /// Weight of the uniform distribution in the final mixture.
    pub mixing: Option<f64>,
    /// Extra uniform quartic mass added before the sphere correction (degree 4 only).
    pub quartic_top_up: Option<f64>,
}

/// A degree-4 linear functional with its moment matrix and how it was built.
#[derive(Debug, Clone)]
pub struct PseudoExpectation {
    pub moment: MomentMatrix,
    pub provenance: Provenance,
    pub params: ConstructionParams,
    /// Whether `‖x‖² = 1` is claimed (and should be verified).
    pub on_sphere: bool,
    pub sphere: Option<SphereCorrectionReport>,
    pub preconditions: Option<PreconditionReport>,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    n: usize,
    provenance: Provenance,
    params: ConstructionParams,
    on_sphere: bool,
    sphere: Option<SphereCorrectionReport>,
    preconditions: Option<PreconditionReport>,
}

impl PseudoExpectation {
    pub fn new(moment: MomentMatrix, provenance: Provenance, params: ConstructionParams, on_sphere: bool) -> Self {
        Self { moment, provenance, params, on_sphere, sphere: None, preconditions: None }
    }

    pub fn n(&self) -> usize {
        self.moment.n()
    }

    /// Writes the moment matrix in the binary matrix format and a JSON sidecar next to it.
    pub fn save(&self, path: &Path) -> Result<()> {
        self.moment.write(&mut BufWriter::new(File::create(path)?))?;
        let sidecar = Sidecar {
            n: self.n(),
            provenance: self.provenance,
            params: self.params.clone(),
            on_sphere: self.on_sphere,
            sphere: self.sphere.clone(),
            preconditions: self.preconditions.clone(),
        };
        serde_json::to_writer_pretty(File::create(tensor_core::io::sidecar_path(path))?, &sidecar)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let moment = MomentMatrix::read(&mut BufReader::new(File::open(path)?))?;
        let s: Sidecar = serde_json::from_reader(BufReader::new(File::open(tensor_core::io::sidecar_path(path))?))?;
        Ok(Self {
            moment,
            provenance: s.provenance,
            params: s.params,
            on_sphere: s.on_sphere,
            sphere: s.sphere,
            preconditions: s.preconditions,
        })
    }
}
