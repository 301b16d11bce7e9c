//! Canonical JSON document form of a formula.
//!
//! Every node is an object tagged by `"kind"`: `variable`, `constant`,
//! `atomic`, `quantified` or `logical`. Keys are emitted in a fixed order
//! with two-space indentation and a trailing newline, so encoding is
//! byte-deterministic and suitable for golden files. The JSON Schema for
//! the format lives in `docs/ast-schema.json`.

use serde::{Deserialize, Serialize};

use crate::ast::{Atom, Connective, Formula, Quantifier, Term, TermKind};
use crate::error::AstError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum TermDoc {
    Variable { name: String },
    Constant { name: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum NodeDoc {
    Atomic { relation: String, args: Vec<TermDoc> },
    Quantified { quantifier: Quantifier, variable: String, body: Box<NodeDoc> },
    Logical { operator: Connective, operands: Vec<NodeDoc> },
}

fn to_doc(f: &Formula) -> NodeDoc {
    match f {
        Formula::Atomic(atom) => NodeDoc::Atomic {
            relation: atom.relation.clone(),
            args: atom
                .args
                .iter()
                .map(|t| match t.kind {
                    TermKind::Variable => TermDoc::Variable { name: t.name.clone() },
                    TermKind::Constant => TermDoc::Constant { name: t.name.clone() },
                })
                .collect(),
        },
        Formula::Quantified { quantifier, variable, body } => {
            NodeDoc::Quantified { quantifier: *quantifier, variable: variable.clone(), body: Box::new(to_doc(body)) }
        }
        other => NodeDoc::Logical {
            operator: other.connective().expect("non-atomic, non-quantified"),
            operands: other.children().into_iter().map(to_doc).collect(),
        },
    }
}

fn required(value: String, what: &str, path: &str) -> Result<String, AstError> {
    if value.trim().is_empty() {
        Err(AstError::InvalidNode(format!("{path}: {what} is empty")))
    } else {
        Ok(value)
    }
}

fn from_doc(doc: NodeDoc, path: &str) -> Result<Formula, AstError> {
    match doc {
        NodeDoc::Atomic { relation, args } => {
            let relation = required(relation, "relation", path)?;
            let args = args
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    let p = format!("{path}/args/{i}");
                    Ok(match t {
                        TermDoc::Variable { name } => Term::var(required(name, "variable name", &p)?),
                        TermDoc::Constant { name } => Term::constant(required(name, "constant name", &p)?),
                    })
                })
                .collect::<Result<Vec<_>, AstError>>()?;
            Atom::new(relation, args).map(Formula::Atomic).map_err(|e| AstError::InvalidNode(format!("{path}: {e}")))
        }
        NodeDoc::Quantified { quantifier, variable, body } => {
            let variable = required(variable, "quantified variable", path)?;
            let body = from_doc(*body, &format!("{path}/body"))?;
            Ok(Formula::quantified(quantifier, variable, body))
        }
        NodeDoc::Logical { operator, operands } => {
            let operands = operands
                .into_iter()
                .enumerate()
                .map(|(i, d)| from_doc(d, &format!("{path}/operands/{i}")))
                .collect::<Result<Vec<_>, _>>()?;
            Formula::logical(operator, operands).map_err(|e| AstError::InvalidNode(format!("{path}: {e}")))
        }
    }
}

/// Structured (untyped) view of the canonical document.
pub fn to_value(f: &Formula) -> serde_json::Value {
    serde_json::to_value(to_doc(f)).expect("document serialization is infallible")
}

/// Canonical text encoding.
pub fn encode(f: &Formula) -> String {
    let mut out = serde_json::to_string_pretty(&to_doc(f)).expect("document serialization is infallible");
    out.push('\n');
    out
}

/// Decodes a canonical document.
///
/// Unreadable or wrongly shaped input (truncated text, unknown tags,
/// missing keys) is a [`AstError::MissingNode`]; a well-shaped document
/// with an empty required value or a wrong operand count is an
/// [`AstError::InvalidNode`].
pub fn decode(document: &[u8]) -> Result<Formula, AstError> {
    let doc: NodeDoc = serde_json::from_slice(document).map_err(|e| AstError::MissingNode(e.to_string()))?;
    from_doc(doc, "#")
}

pub fn decode_str(document: &str) -> Result<Formula, AstError> {
    decode(document.as_bytes())
}

/// Decodes from an already-parsed JSON value.
pub fn from_value(value: serde_json::Value) -> Result<Formula, AstError> {
    let doc: NodeDoc = serde_json::from_value(value).map_err(|e| AstError::MissingNode(e.to_string()))?;
    from_doc(doc, "#")
}
