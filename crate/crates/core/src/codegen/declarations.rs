use indexmap::{IndexMap, IndexSet};
use serde::Serialize;

use crate::ast::{Formula, TermKind};
use crate::error::CodegenError;

/// Symbol table built by the declaration pass.
///
/// Entries are unique and kept in first-encounter order of a preorder walk
/// over the input formulas, which makes everything emitted from it
/// deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DeclarationSet {
    pub constants: IndexSet<String>,
    pub variables: IndexSet<String>,
    pub relations: IndexMap<String, usize>,
}

impl DeclarationSet {
    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty() && self.variables.is_empty() && self.relations.is_empty()
    }

    fn declare_relation(&mut self, name: &str, arity: usize) -> Result<(), CodegenError> {
        match self.relations.get(name) {
            Some(&expected) if expected != arity => {
                Err(CodegenError::ArityMismatch { relation: name.to_string(), expected, found: arity })
            }
            Some(_) => Ok(()),
            None => {
                self.relations.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn visit(&mut self, f: &Formula) -> Result<(), CodegenError> {
        match f {
            Formula::Atomic(atom) => {
                self.declare_relation(&atom.relation, atom.args.len())?;
                for term in &atom.args {
                    match term.kind {
                        TermKind::Variable => self.variables.insert(term.name.clone()),
                        TermKind::Constant => self.constants.insert(term.name.clone()),
                    };
                }
            }
            Formula::Quantified { variable, body, .. } => {
                self.variables.insert(variable.clone());
                self.visit(body)?;
            }
            // connectives declare nothing; only their operands are visited
            other => {
                for child in other.children() {
                    self.visit(child)?;
                }
            }
        }
        Ok(())
    }
}

/// First pass: registers every constant, variable and relation signature
/// occurring in `formulas`.
pub fn collect_declarations<'a>(
    formulas: impl IntoIterator<Item = &'a Formula>,
) -> Result<DeclarationSet, CodegenError> {
    let mut decls = DeclarationSet::default();
    for f in formulas {
        decls.visit(f)?;
    }
    Ok(decls)
}
