use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::SentenceClass;
use crate::error::{ErrorCode, ParseError};
use crate::schema::SchemaId;

/// One backend exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Recursion depth of the sentence this exchange belongs to (root is 1).
    pub depth: usize,
    /// The class the sentence was routed to, once known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<SentenceClass>,
    pub schema_id: SchemaId,
    pub input: String,
    /// The verified document, absent when the exchange failed.
    pub document: Option<Value>,
    /// Sub-sentences handed to the next recursion level.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rewrite: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TraceOutcome {
    /// Canonical document of the parsed formula.
    Parsed {
        formula: Value,
    },
    Failed {
        code: Option<ErrorCode>,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseTrace {
    pub sentence: String,
    pub steps: Vec<TraceStep>,
    pub outcome: TraceOutcome,
    pub depth_reached: usize,
}

impl ParseTrace {
    pub fn error_code(&self) -> Option<ErrorCode> {
        match &self.outcome {
            TraceOutcome::Parsed { .. } => None,
            TraceOutcome::Failed { code, .. } => *code,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes") + "\n"
    }

    pub(crate) fn failed(err: &ParseError) -> TraceOutcome {
        TraceOutcome::Failed { code: err.code(), message: err.to_string() }
    }
}
