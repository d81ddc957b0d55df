//! JSON matrix files and build manifests.

use std::fs;
use std::path::Path;

use fermirep::{Complex64, FockOperator, Variant};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

/// How a matrix was produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub modes: usize,
    pub entries: Vec<Entry>,
    pub metadata: Metadata,
}

impl MatrixFile {
    pub fn from_operator(op: &FockOperator, metadata: Metadata) -> Self {
        Self {
            dim: op.dim(),
            modes: op.modes(),
            entries: op
                .entries()
                .map(|(row, col, v)| Entry {
                    row,
                    col,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
            metadata,
        }
    }

    /// Checks the schema invariants and rebuilds the operator.
    pub fn to_operator(&self) -> Result<FockOperator, CliError> {
        if self.modes >= usize::BITS as usize || self.dim != 1usize << self.modes {
            return Err(CliError::Format(format!(
                "dim {} does not match {} modes",
                self.dim, self.modes
            )));
        }
        for pair in self.entries.windows(2) {
            if (pair[0].row, pair[0].col) >= (pair[1].row, pair[1].col) {
                return Err(CliError::Format(format!(
                    "entries not strictly sorted at ({}, {})",
                    pair[1].row, pair[1].col
                )));
            }
        }
        FockOperator::from_triplets(
            self.modes,
            self.entries
                .iter()
                .map(|e| (e.row, e.col, Complex64::new(e.re, e.im))),
        )
        .map_err(|e| CliError::Format(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_json(path, self)
    }
}

/// Describes a build directory; `files[k]` holds generator `labels[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub group: String,
    pub variant: Variant,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<(bool, bool)>,
    pub generators: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators2: Option<String>,
    pub dim: usize,
    pub labels: Vec<String>,
    pub files: Vec<String>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

impl Manifest {
    pub fn read(dir: &Path) -> Result<Self, CliError> {
        read_json(&dir.join(MANIFEST_NAME))
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        write_json(&dir.join(MANIFEST_NAME), self)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
