//! Registered response schemas, one per parser prompt.
//!
//! Definitions are JSON Schema documents shipped in `schemas/`. They are
//! sent to endpoints that support structured output and always re-checked
//! locally by [`SchemaId::verify`], which classifies a document as valid,
//! a missing node or an invalid node.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::backend::BackendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemaId {
    Selector,
    Quantified,
    LogicalBinary,
    LogicalUnary,
    AtomicKind,
    AtomicAdjective,
    AtomicIntransitive,
    AtomicTransitive,
    AtomicDitransitive,
}

impl SchemaId {
    pub const ALL: [SchemaId; 9] = [
        SchemaId::Selector,
        SchemaId::Quantified,
        SchemaId::LogicalBinary,
        SchemaId::LogicalUnary,
        SchemaId::AtomicKind,
        SchemaId::AtomicAdjective,
        SchemaId::AtomicIntransitive,
        SchemaId::AtomicTransitive,
        SchemaId::AtomicDitransitive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemaId::Selector => "selector",
            SchemaId::Quantified => "quantified",
            SchemaId::LogicalBinary => "logical_binary",
            SchemaId::LogicalUnary => "logical_unary",
            SchemaId::AtomicKind => "atomic_kind",
            SchemaId::AtomicAdjective => "atomic_adjective",
            SchemaId::AtomicIntransitive => "atomic_intransitive",
            SchemaId::AtomicTransitive => "atomic_transitive",
            SchemaId::AtomicDitransitive => "atomic_ditransitive",
        }
    }

    fn source(self) -> &'static str {
        match self {
            SchemaId::Selector => include_str!("../schemas/selector.json"),
            SchemaId::Quantified => include_str!("../schemas/quantified.json"),
            SchemaId::LogicalBinary => include_str!("../schemas/logical_binary.json"),
            SchemaId::LogicalUnary => include_str!("../schemas/logical_unary.json"),
            SchemaId::AtomicKind => include_str!("../schemas/atomic_kind.json"),
            SchemaId::AtomicAdjective => include_str!("../schemas/atomic_adjective.json"),
            SchemaId::AtomicIntransitive => include_str!("../schemas/atomic_intransitive.json"),
            SchemaId::AtomicTransitive => include_str!("../schemas/atomic_transitive.json"),
            SchemaId::AtomicDitransitive => include_str!("../schemas/atomic_ditransitive.json"),
        }
    }

    /// The JSON Schema definition.
    pub fn definition(self) -> &'static Value {
        static DEFS: OnceLock<Vec<Value>> = OnceLock::new();
        let defs = DEFS.get_or_init(|| {
            SchemaId::ALL
                .iter()
                .map(|id| serde_json::from_str(id.source()).expect("shipped schema is valid JSON"))
                .collect()
        });
        &defs[self as usize]
    }

    /// Key spellings seen in model output for the same field.
    fn aliases(self) -> &'static [(&'static str, &'static str)] {
        match self {
            SchemaId::AtomicTransitive => &[("transitive_verb", "verb"), ("object", "obj")],
            SchemaId::AtomicDitransitive => &[("indirect_object", "indirect_obj"), ("direct_object", "direct_obj")],
            SchemaId::AtomicAdjective => &[("object", "obj")],
            _ => &[],
        }
    }

    /// Checks a document against the definition and returns the object with
    /// aliased keys renamed to their canonical spelling.
    ///
    /// A document that is not an object, lacks a required key, or carries a
    /// non-string value is a missing node. A required string that is empty
    /// or outside the allowed values is an invalid node.
    pub fn verify(self, document: &Value) -> Result<Map<String, Value>, BackendError> {
        let Value::Object(fields) = document else {
            return Err(BackendError::MissingNode(format!("{self}: expected an object, got {document}")));
        };
        let mut fields = fields.clone();
        for (alias, canonical) in self.aliases() {
            if !fields.contains_key(*canonical) {
                if let Some(v) = fields.remove(*alias) {
                    fields.insert(canonical.to_string(), v);
                }
            }
        }

        let def = self.definition();
        let properties = def["properties"].as_object().expect("schema properties");
        let required = def["required"].as_array().expect("schema required list");
        for key in required.iter().filter_map(Value::as_str) {
            let value = match fields.get(key) {
                Some(Value::String(s)) => s,
                Some(other) => {
                    return Err(BackendError::MissingNode(format!("{self}: field {key:?} is not a string: {other}")))
                }
                None => return Err(BackendError::MissingNode(format!("{self}: field {key:?} is missing"))),
            };
            if value.trim().is_empty() {
                return Err(BackendError::InvalidNode(format!("{self}: field {key:?} is empty")));
            }
            if let Some(allowed) = properties.get(key).and_then(|p| p["enum"].as_array()) {
                if !allowed.iter().any(|a| a.as_str() == Some(value.as_str())) {
                    return Err(BackendError::InvalidNode(format!("{self}: {key:?} has unknown value {value:?}")));
                }
            }
        }
        Ok(fields)
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| format!("unknown schema id {s:?}"))
    }
}
