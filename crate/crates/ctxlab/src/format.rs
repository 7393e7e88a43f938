//! The JSON scenario file.
//!
//! Complex numbers are `[re, im]` pairs; vectors are arrays of pairs and
//! matrices arrays of rows. Joint vectors use the environment-major layout
//! `e * system_dim + s`.

use std::path::Path;

use ctxlab_core::dilation::{povm_from_dilation, Dilation, JointOutcomeSet};
use ctxlab_core::{Complex64, DensityMatrix, Ket, Operator, Payload, Povm, Space, State};
use serde::{Deserialize, Serialize};

use crate::FileError;

pub const FORMAT_VERSION: u32 = 1;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub system_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outcomes: Vec<LabelledVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_init: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub povm: Vec<PovmEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<StateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardy: Option<HardySection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledVector {
    pub label: String,
    pub vector: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Pair>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<Vec<Pair>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardySection {
    pub f: String,
    pub d1: String,
    pub d2: String,
    pub basis1: Vec<Pair>,
    pub basis2: Vec<Pair>,
}

pub fn encode_ket(k: &Ket) -> Vec<Pair> {
    k.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

pub fn encode_operator(op: &Operator) -> Vec<Vec<Pair>> {
    op.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn encode_povm(p: &Povm) -> Vec<PovmEntry> {
    p.elements()
        .iter()
        .map(|e| match &e.payload {
            Payload::Vector(v) => PovmEntry {
                label: e.label.clone(),
                vector: Some(encode_ket(v)),
                matrix: None,
            },
            Payload::Operator(op) => PovmEntry {
                label: e.label.clone(),
                vector: None,
                matrix: Some(encode_operator(op)),
            },
        })
        .collect()
}

fn decode_ket(space: Space, pairs: &[Pair], what: &str) -> Result<Ket, FileError> {
    if pairs.len() != space.dim() {
        return Err(FileError::Schema(format!(
            "{what}: expected {} entries, found {}",
            space.dim(),
            pairs.len()
        )));
    }
    Ok(Ket::new(
        space,
        pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
    )?)
}

fn decode_operator(space: Space, rows: &[Vec<Pair>], what: &str) -> Result<Operator, FileError> {
    let n = space.dim();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(FileError::Schema(format!("{what}: expected a {n}x{n} matrix")));
    }
    Ok(Operator::new(
        space,
        rows.iter()
            .map(|r| r.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .collect(),
    )?)
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|e| FileError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        file.validate_shape()?;
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        std::fs::write(path, self.to_json()).map_err(|e| FileError::Io(path.display().to_string(), e))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }

    pub fn empty(system_dim: usize) -> Self {
        ScenarioFile {
            version: FORMAT_VERSION,
            system_dim,
            env_dim: None,
            outcomes: Vec::new(),
            phi_init: None,
            povm: Vec::new(),
            states: Vec::new(),
            hardy: None,
        }
    }

    fn validate_shape(&self) -> Result<(), FileError> {
        if self.version != FORMAT_VERSION {
            return Err(FileError::Schema(format!("unsupported version {}", self.version)));
        }
        if self.system_dim == 0 {
            return Err(FileError::Schema("system_dim must be positive".into()));
        }
        let has_outcomes = !self.outcomes.is_empty();
        if has_outcomes != self.phi_init.is_some() || has_outcomes != self.env_dim.is_some() {
            return Err(FileError::Schema(
                "outcomes, phi_init and env_dim must be given together".into(),
            ));
        }
        if self.env_dim == Some(0) {
            return Err(FileError::Schema("env_dim must be positive".into()));
        }
        if !has_outcomes && self.povm.is_empty() {
            return Err(FileError::Schema(
                "file needs outcomes/phi_init or a povm section".into(),
            ));
        }
        for e in &self.povm {
            if e.vector.is_some() == e.matrix.is_some() {
                return Err(FileError::Schema(format!(
                    "povm element `{}` needs exactly one of vector or matrix",
                    e.label
                )));
            }
        }
        for s in &self.states {
            if s.vector.is_some() == s.density.is_some() {
                return Err(FileError::Schema(format!(
                    "state `{}` needs exactly one of vector or density",
                    s.label
                )));
            }
        }
        Ok(())
    }

    fn system(&self) -> Space {
        Space::System(self.system_dim)
    }

    pub fn has_dilation(&self) -> bool {
        !self.outcomes.is_empty()
    }

    pub fn dilation(&self, tol: f64) -> Result<Option<Dilation>, FileError> {
        let (Some(env_dim), Some(phi)) = (self.env_dim, &self.phi_init) else {
            return Ok(None);
        };
        let joint = Space::joint(env_dim, self.system_dim)?;
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| {
                Ok((
                    o.label.clone(),
                    decode_ket(joint, &o.vector, &format!("outcome `{}`", o.label))?,
                ))
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        let set = JointOutcomeSet::new(env_dim, self.system_dim, outcomes, tol)?;
        let phi = decode_ket(Space::Environment(env_dim), phi, "phi_init")?;
        Ok(Some(Dilation::with_tol(set, phi, tol)?))
    }

    /// The declared POVM section, if any.
    pub fn declared_povm(&self, tol: f64) -> Result<Option<Povm>, FileError> {
        if self.povm.is_empty() {
            return Ok(None);
        }
        let space = self.system();
        let elements = self
            .povm
            .iter()
            .map(|e| {
                let what = format!("povm element `{}`", e.label);
                let payload = match (&e.vector, &e.matrix) {
                    (Some(v), None) => Payload::Vector(decode_ket(space, v, &what)?),
                    (None, Some(m)) => Payload::Operator(decode_operator(space, m, &what)?),
                    _ => unreachable!("validated"),
                };
                Ok((e.label.clone(), payload))
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        Ok(Some(Povm::with_tol(self.system_dim, elements, tol)?))
    }

    /// The POVM section, or the POVM derived from the dilation.
    pub fn povm(&self, tol: f64) -> Result<Povm, FileError> {
        if let Some(p) = self.declared_povm(tol)? {
            return Ok(p);
        }
        let d = self.dilation(tol)?.expect("validated: one of the two is present");
        Ok(povm_from_dilation(&d)?)
    }

    pub fn states(&self, tol: f64) -> Result<Vec<(String, State)>, FileError> {
        let space = self.system();
        self.states
            .iter()
            .map(|s| {
                let what = format!("state `{}`", s.label);
                let st = match (&s.vector, &s.density) {
                    (Some(v), None) => State::pure(decode_ket(space, v, &what)?, tol)?,
                    (None, Some(m)) => State::Mixed(DensityMatrix::new(decode_operator(space, m, &what)?, tol)?),
                    _ => unreachable!("validated"),
                };
                Ok((s.label.clone(), st))
            })
            .collect()
    }

    /// `(labels, basis1, basis2)` of the Hardy section.
    pub fn hardy(&self) -> Result<Option<([String; 3], Ket, Ket)>, FileError> {
        let Some(h) = &self.hardy else {
            return Ok(None);
        };
        let b1 = decode_ket(self.system(), &h.basis1, "hardy.basis1")?;
        let b2 = decode_ket(self.system(), &h.basis2, "hardy.basis2")?;
        Ok(Some(([h.f.clone(), h.d1.clone(), h.d2.clone()], b1, b2)))
    }
}
