//! JSON file format for families.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constructions::ConstructionParams;
use crate::error::SpidError;
use crate::gf::FieldPrime;
use crate::spid::SpidFamily;
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub construction: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub q: u32,
    pub ambient: usize,
    pub k: usize,
    /// One row matrix per member; rows need not be reduced.
    pub subspaces: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, thiserror::Error)]
pub enum FamilyFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid family: {0}")]
    Invalid(SpidError),
}

impl FamilyFile {
    pub fn from_family(family: &SpidFamily, params: Option<&ConstructionParams>) -> Self {
        Self {
            q: family.field().order(),
            ambient: family.ambient_dim(),
            k: family.k(),
            subspaces: family.members().iter().map(|s| s.basis().to_vec()).collect(),
            metadata: params.map(|p| Metadata {
                construction: p.name().to_string(),
                params: serde_json::to_value(p).expect("params serialize"),
            }),
        }
    }

    /// Canonicalizes every member and checks the family invariants.
    pub fn to_family(&self) -> Result<SpidFamily, SpidError> {
        let field = FieldPrime::new(self.q)?;
        let mut members = Vec::with_capacity(self.subspaces.len());
        for (i, rows) in self.subspaces.iter().enumerate() {
            let s = Subspace::span(field, self.ambient, rows.iter().cloned())?;
            if s.dim() != self.k {
                return Err(SpidError::InvalidFamily(format!(
                    "subspace {i} has dimension {} but k = {}",
                    s.dim(),
                    self.k
                )));
            }
            members.push(s);
        }
        SpidFamily::new(members)
    }

    /// Parameters recorded in the metadata, if they parse.
    pub fn params(&self) -> Option<ConstructionParams> {
        let m = self.metadata.as_ref()?;
        serde_json::from_value(m.params.clone()).ok()
    }

    pub fn parse(text: &str) -> Result<Self, FamilyFileError> {
        serde_json::from_str(text).map_err(|e| FamilyFileError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family file serializes")
    }

    pub fn load(path: &Path) -> Result<(Self, SpidFamily), FamilyFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FamilyFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file = Self::parse(&text)?;
        let family = file.to_family().map_err(FamilyFileError::Invalid)?;
        Ok((file, family))
    }

    pub fn save(&self, path: &Path) -> Result<(), FamilyFileError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|source| FamilyFileError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}
