use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::NliLabel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NliInstance {
    pub premises: Vec<String>,
    pub hypothesis: String,
    #[serde(rename = "label")]
    pub gold: NliLabel,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
    #[error("dataset is empty")]
    Empty,
}

/// Reads line-delimited records. Blank lines are skipped; line numbers in
/// errors are 1-based.
pub fn parse_dataset(text: &str) -> Result<Vec<NliInstance>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record = |message: String| DatasetError::Record { line: line_no, message };
        let inst: NliInstance = serde_json::from_str(line).map_err(|e| record(e.to_string()))?;
        if inst.premises.is_empty() {
            return Err(record("at least one premise is required".into()));
        }
        if let Some(k) = inst.premises.iter().position(|p| p.trim().is_empty()) {
            return Err(record(format!("premise {k} is empty")));
        }
        if inst.hypothesis.trim().is_empty() {
            return Err(record("hypothesis is empty".into()));
        }
        out.push(inst);
    }
    if out.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(out)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<NliInstance>, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| DatasetError::Io { path: path.display().to_string(), source })?;
    parse_dataset(&text)
}
