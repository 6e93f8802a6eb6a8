//! JSON file formats for QRTs, Kripke models and translation records.
//!
//! Matrices are nested arrays of rows, each entry a `[re, im]` pair.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tolerances;
use crate::kripke::{KripkeError, KripkeModel, StarredModel};
use crate::linalg::{ComplexMatrix, DensityMatrix, KrausChannel, LinalgError};
use crate::qrt::{ChannelDecl, Qrt, QrtError, SystemDecl};
use crate::relation::Relation;
use crate::translate::{RecordEdge, TranslationRecord};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: {source}")]
    Linalg {
        context: String,
        #[source]
        source: LinalgError,
    },
    #[error(transparent)]
    Qrt(#[from] QrtError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error("{0}")]
    Invalid(String),
}

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<ComplexMatrix, LinalgError> {
    ComplexMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub id: String,
    pub dim: usize,
    pub states: IndexMap<String, MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub id: String,
    pub from: String,
    pub to: String,
    pub kraus: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QrtFile {
    pub systems: Vec<SystemFile>,
    #[serde(default)]
    pub channels: Vec<ChannelFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<String>,
}

impl QrtFile {
    pub fn from_qrt(q: &Qrt) -> Self {
        QrtFile {
            systems: q
                .systems()
                .iter()
                .map(|s| SystemFile {
                    id: s.id.clone(),
                    dim: s.dim,
                    states: s
                        .states
                        .iter()
                        .map(|(n, rho)| (n.clone(), matrix_to_json(rho.matrix())))
                        .collect(),
                })
                .collect(),
            channels: q
                .channels()
                .iter()
                .map(|c| ChannelFile {
                    id: c.id.clone(),
                    from: c.from.clone(),
                    to: c.to.clone(),
                    kraus: c.channel.kraus().iter().map(matrix_to_json).collect(),
                })
                .collect(),
            trivial: q.trivial_id().map(str::to_owned),
        }
    }

    /// Builds the QRT, inserting missing identities. States must be density
    /// matrices; channel validity is left to `validate_qrt`.
    pub fn to_qrt(&self, tol: Tolerances) -> Result<Qrt, FormatError> {
        let linalg = |context: String| move |source| FormatError::Linalg { context, source };
        let mut systems = Vec::with_capacity(self.systems.len());
        for s in &self.systems {
            let mut states = Vec::with_capacity(s.states.len());
            for (name, m) in &s.states {
                let label = format!("state {}.{}", s.id, name);
                let matrix = matrix_from_json(m).map_err(linalg(label.clone()))?;
                let rho = DensityMatrix::new(matrix, &tol).map_err(linalg(label))?;
                states.push((name.clone(), rho));
            }
            systems.push(SystemDecl {
                id: s.id.clone(),
                dim: s.dim,
                states,
            });
        }
        let mut channels = Vec::with_capacity(self.channels.len());
        for c in &self.channels {
            let label = format!("channel {}", c.id);
            let kraus = c
                .kraus
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>, _>>()
                .map_err(linalg(label.clone()))?;
            let channel = KrausChannel::from_kraus(kraus).map_err(linalg(label))?;
            channels.push(ChannelDecl {
                id: c.id.clone(),
                from: c.from.clone(),
                to: c.to.clone(),
                channel,
            });
        }
        Ok(Qrt::new(systems, channels, self.trivial.clone(), tol)?)
    }
}

pub fn qrt_from_json(text: &str, tol: Tolerances) -> Result<Qrt, FormatError> {
    let file: QrtFile = serde_json::from_str(text)?;
    file.to_qrt(tol)
}

pub fn qrt_to_json(q: &Qrt) -> String {
    serde_json::to_string_pretty(&QrtFile::from_qrt(q)).expect("serializable") + "\n"
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    pub access: Vec<(String, String)>,
    pub domain: Vec<String>,
    pub domains: BTreeMap<String, Vec<String>>,
    pub interp: BTreeMap<String, u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<(String, String)>>,
}

impl ModelFile {
    pub fn from_model(m: &KripkeModel, order: Option<&Relation>) -> Self {
        let atoms = m.atoms();
        let worlds = m.worlds();
        ModelFile {
            worlds: worlds.to_vec(),
            access: m
                .access()
                .pairs()
                .map(|(a, b)| (worlds[a].clone(), worlds[b].clone()))
                .collect(),
            domain: atoms.to_vec(),
            domains: (0..worlds.len())
                .map(|w| (worlds[w].clone(), m.domain(w).iter().map(|&a| atoms[a].clone()).collect()))
                .collect(),
            interp: (0..atoms.len()).map(|a| (atoms[a].clone(), u8::from(m.truth(a)))).collect(),
            order: order.map(|o| o.pairs().map(|(a, b)| (atoms[a].clone(), atoms[b].clone())).collect()),
        }
    }

    pub fn to_model(&self) -> Result<KripkeModel, FormatError> {
        let interp = self
            .interp
            .iter()
            .map(|(a, v)| match v {
                0 => Ok((a.clone(), false)),
                1 => Ok((a.clone(), true)),
                _ => Err(FormatError::Invalid(format!("interp of {a} must be 0 or 1, got {v}"))),
            })
            .collect::<Result<_, _>>()?;
        Ok(KripkeModel::new(
            self.worlds.clone(),
            self.access.clone(),
            self.domain.clone(),
            self.domains.clone(),
            interp,
        )?)
    }

    /// The order as a relation on `D`, if present.
    pub fn to_order(&self, m: &KripkeModel) -> Result<Option<Relation>, FormatError> {
        let Some(pairs) = &self.order else { return Ok(None) };
        let mut r = Relation::empty(m.atoms().len());
        for (a, b) in pairs {
            let ia = m.atom_index(a).ok_or_else(|| KripkeError::UnknownAtom(a.clone()))?;
            let ib = m.atom_index(b).ok_or_else(|| KripkeError::UnknownAtom(b.clone()))?;
            r.insert(ia, ib);
        }
        Ok(Some(r))
    }

    pub fn to_starred(&self) -> Result<Option<StarredModel>, FormatError> {
        let m = self.to_model()?;
        match self.to_order(&m)? {
            Some(o) => Ok(Some(StarredModel::new(m, o)?)),
            None => Ok(None),
        }
    }
}

pub fn model_from_json(text: &str) -> Result<ModelFile, FormatError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordFile {
    pub model: ModelFile,
    pub world_of: BTreeMap<String, String>,
    pub atom_of: BTreeMap<String, String>,
    #[serde(default)]
    pub c_world: Option<String>,
    #[serde(default)]
    pub edges: Vec<RecordEdge>,
}

impl RecordFile {
    pub fn from_record(rec: &TranslationRecord) -> Self {
        RecordFile {
            model: ModelFile::from_model(&rec.model, rec.order.as_ref()),
            world_of: rec.world_of.clone(),
            atom_of: rec.atom_of.clone(),
            c_world: rec.c_world.clone(),
            edges: rec.edges.clone(),
        }
    }

    pub fn to_record(&self) -> Result<TranslationRecord, FormatError> {
        let model = self.model.to_model()?;
        let order = self.model.to_order(&model)?;
        Ok(TranslationRecord {
            model,
            order,
            world_of: self.world_of.clone(),
            atom_of: self.atom_of.clone(),
            c_world: self.c_world.clone(),
            edges: self.edges.clone(),
        })
    }
}

pub fn record_to_json(rec: &TranslationRecord) -> String {
    serde_json::to_string_pretty(&RecordFile::from_record(rec)).expect("serializable") + "\n"
}

pub fn record_from_json(text: &str) -> Result<TranslationRecord, FormatError> {
    serde_json::from_str::<RecordFile>(text)?.to_record()
}

pub fn model_to_json(m: &KripkeModel, order: Option<&Relation>) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(m, order)).expect("serializable") + "\n"
}
