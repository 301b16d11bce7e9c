use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::{BackendError, Completion, CompletionBackend, PromptRequest};
use crate::schema::SchemaId;

/// One canned exchange. A string `response` is replayed as raw completion
/// text (useful for truncated output); anything else is serialized JSON.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ScriptRecord {
    pub schema_id: SchemaId,
    pub input: String,
    pub response: Value,
}

/// Replays scripted responses keyed by `(schema, trimmed input)`.
///
/// Read-only after construction. A request with no entry fails with
/// [`BackendError::Unscripted`] rather than falling back to anything.
#[derive(Debug, Clone, Default)]
pub struct ScriptedBackend {
    table: HashMap<(SchemaId, String), String>,
}

impl ScriptedBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: impl IntoIterator<Item = ScriptRecord>) -> Result<Self, BackendError> {
        let mut backend = Self::new();
        for r in records {
            let text = match r.response {
                Value::String(s) => s,
                other => other.to_string(),
            };
            backend.insert(r.schema_id, &r.input, text)?;
        }
        Ok(backend)
    }

    /// Accepts a JSON array of records or one record per line.
    pub fn from_script(text: &str) -> Result<Self, BackendError> {
        let trimmed = text.trim_start();
        let records: Vec<ScriptRecord> = if trimmed.starts_with('[') {
            serde_json::from_str(trimmed).map_err(|e| BackendError::Config(format!("script: {e}")))?
        } else {
            text.lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    serde_json::from_str(l).map_err(|e| BackendError::Config(format!("script line {}: {e}", i + 1)))
                })
                .collect::<Result<_, _>>()?
        };
        Self::from_records(records)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, BackendError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::Config(format!("cannot read script {}: {e}", path.display())))?;
        Self::from_script(&text)
    }

    /// Adds an exchange. Re-adding an identical exchange is a no-op; a
    /// conflicting one is an error.
    pub fn insert(&mut self, schema: SchemaId, input: &str, response: impl Into<String>) -> Result<(), BackendError> {
        let key = (schema, input.trim().to_string());
        let response = response.into();
        match self.table.get(&key) {
            Some(existing) if *existing != response => Err(BackendError::Config(format!(
                "conflicting scripted responses for schema {schema} and input {:?}",
                key.1
            ))),
            _ => {
                self.table.insert(key, response);
                Ok(())
            }
        }
    }

    /// Builder form of [`insert`](Self::insert) for a JSON document.
    pub fn with(mut self, schema: SchemaId, input: &str, document: Value) -> Self {
        self.insert(schema, input, document.to_string()).expect("non-conflicting script entry");
        self
    }

    /// Builder form of [`insert`](Self::insert) for raw text.
    pub fn with_raw(mut self, schema: SchemaId, input: &str, raw: &str) -> Self {
        self.insert(schema, input, raw).expect("non-conflicting script entry");
        self
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl CompletionBackend for ScriptedBackend {
    fn complete(&self, request: &PromptRequest) -> Result<Completion, BackendError> {
        let key = (request.schema, request.user_input.trim().to_string());
        match self.table.get(&key) {
            Some(text) => Ok(Completion { text: text.clone(), usage: None }),
            None => Err(BackendError::Unscripted { schema: key.0, input: key.1 }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorCode;
    use serde_json::json;

    #[test]
    fn replays_and_rejects_unknown_pairs() {
        let b = ScriptedBackend::new().with(SchemaId::Selector, "Alice sings.", json!({"answer": "A"}));
        let req = PromptRequest::new(SchemaId::Selector, "Alice sings.");
        let first = b.complete_structured(&req).unwrap();
        let second = b.complete_structured(&req).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.document, json!({"answer": "A"}));

        let other = PromptRequest::new(SchemaId::Selector, "Bob sings.");
        assert!(matches!(b.complete_structured(&other), Err(BackendError::Unscripted { .. })));
    }

    #[test]
    fn jsonl_and_array_scripts() {
        let jsonl = r#"{"schema_id": "selector", "input": "Alice sings.", "response": {"answer": "A"}}
{"schema_id": "logical_binary", "input": "Alice sings and dances.", "response": "{\"operator\": \"And\", \"left_"}
"#;
        let b = ScriptedBackend::from_script(jsonl).unwrap();
        assert_eq!(b.len(), 2);
        let err =
            b.complete_structured(&PromptRequest::new(SchemaId::LogicalBinary, "Alice sings and dances.")).unwrap_err();
        assert_eq!(err.code(), Some(ErrorCode::MissingNode));

        let array = r#"[{"schema_id": "selector", "input": "x", "response": {"answer": "B"}}]"#;
        assert_eq!(ScriptedBackend::from_script(array).unwrap().len(), 1);
    }

    #[test]
    fn bad_scripts_are_config_errors() {
        assert!(matches!(ScriptedBackend::from_script("{nope"), Err(BackendError::Config(m)) if m.contains("line 1")));
        let conflict = r#"[{"schema_id": "selector", "input": "x", "response": {"answer": "B"}},
                           {"schema_id": "selector", "input": "x", "response": {"answer": "A"}}]"#;
        assert!(matches!(ScriptedBackend::from_script(conflict), Err(BackendError::Config(_))));
    }

    #[test]
    fn empty_object_is_invalid() {
        let b = ScriptedBackend::new().with(
            SchemaId::AtomicTransitive,
            "Sophia is kind",
            json!({"transitive_verb": "kind", "subject": "sophia", "object": ""}),
        );
        let err = b.complete_structured(&PromptRequest::new(SchemaId::AtomicTransitive, "Sophia is kind")).unwrap_err();
        assert_eq!(err.code(), Some(ErrorCode::InvalidNode));
    }
}
