//! Two-pass compilation of formulas into solver programs.
//!
//! The first pass ([`collect_declarations`]) walks every formula in preorder
//! and records constants, variables and relation signatures. The second
//! pass ([`generate_expression`]) revisits each node and emits target text,
//! resolving every identifier through the declarations of the first pass.
//! Quantifiers open a scope; a binder that reuses a name already visible
//! (an outer binder or a global symbol) is alpha-renamed so that no
//! occurrence is captured.
//!
//! Two targets are supported: SMT-LIB v2 over one uninterpreted sort
//! `Object`, and Unicode first-order notation for display.

mod declarations;
mod symbols;

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub use declarations::{collect_declarations, DeclarationSet};
pub use symbols::{sanitize, UNIVERSE_SORT};

use crate::ast::{negate, Formula, Quantifier, Term, TermKind};
use crate::error::CodegenError;
use crate::ident::fresh_name;
use symbols::{is_reserved, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    SmtLib2,
    FolText,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::SmtLib2 => "smtlib2",
            Target::FolText => "fol",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Declarations plus one assertion per formula.
    Translate,
    /// Premises, the negated hypothesis, and a satisfiability query:
    /// the hypothesis is entailed iff the query answers `unsat`.
    CheckEntails,
}

/// An ordered solver-language document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetProgram {
    pub target: Target,
    /// Source identifiers that had to be changed, in emission order.
    pub renames: IndexMap<String, String>,
    pub declarations: Vec<String>,
    pub assertions: Vec<String>,
    pub query: Option<String>,
}

impl TargetProgram {
    pub fn header(&self) -> Vec<String> {
        self.renames.iter().map(|(old, new)| format!(";; renamed {old} -> {new}")).collect()
    }

    /// All lines in order: rename comments, declarations, assertions, query.
    pub fn lines(&self) -> Vec<String> {
        let mut lines = self.header();
        lines.extend(self.declarations.iter().cloned());
        lines.extend(self.assertions.iter().cloned());
        lines.extend(self.query.iter().cloned());
        lines
    }
}

impl fmt::Display for TargetProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

const FORALL: &str = "∀";
const EXISTS: &str = "∃";
const AND: &str = "∧";
const OR: &str = "∨";
const NOT: &str = "¬";
const IMPLIES: &str = "→";

struct Emitter<'a> {
    target: Target,
    env: &'a DeclarationSet,
    symbols: SymbolTable,
    /// (source name, emitted name) for each enclosing binder, innermost last.
    scope: Vec<(String, String)>,
}

impl<'a> Emitter<'a> {
    fn new(env: &'a DeclarationSet, target: Target) -> Self {
        let symbols = match target {
            Target::SmtLib2 => SymbolTable::for_smt(env),
            Target::FolText => SymbolTable::verbatim(env),
        };
        Emitter { target, env, symbols, scope: Vec::new() }
    }

    fn term(&self, term: &Term) -> Result<String, CodegenError> {
        match term.kind {
            TermKind::Variable => self
                .scope
                .iter()
                .rev()
                .find(|(src, _)| src == &term.name)
                .map(|(_, emitted)| emitted.clone())
                .ok_or_else(|| CodegenError::UndeclaredSymbol(term.name.clone())),
            TermKind::Constant => self
                .symbols
                .constant(&term.name)
                .map(str::to_string)
                .ok_or_else(|| CodegenError::UndeclaredSymbol(term.name.clone())),
        }
    }

    fn binder_name(&self, variable: &str) -> String {
        let base = match self.target {
            Target::SmtLib2 => sanitize(variable),
            Target::FolText => variable.to_string(),
        };
        let taken = |name: &str| {
            self.scope.iter().any(|(_, emitted)| emitted == name)
                || self.symbols.is_global(name)
                || (self.target == Target::SmtLib2 && is_reserved(name))
        };
        if taken(&base) {
            fresh_name(&base, taken)
        } else {
            base
        }
    }

    fn emit(&mut self, f: &Formula) -> Result<String, CodegenError> {
        match f {
            Formula::Atomic(atom) => {
                let relation = self
                    .symbols
                    .relation(&atom.relation)
                    .ok_or_else(|| CodegenError::UndeclaredSymbol(atom.relation.clone()))?
                    .to_string();
                let expected = self.env.relation_arity(&atom.relation).unwrap_or(atom.args.len());
                if expected != atom.args.len() {
                    return Err(CodegenError::ArityMismatch {
                        relation: atom.relation.clone(),
                        expected,
                        found: atom.args.len(),
                    });
                }
                let args = atom.args.iter().map(|t| self.term(t)).collect::<Result<Vec<_>, _>>()?;
                Ok(match self.target {
                    Target::SmtLib2 => format!("({relation} {})", args.join(" ")),
                    Target::FolText => format!("{relation}({})", args.join(", ")),
                })
            }
            Formula::Quantified { quantifier, variable, body } => {
                let bound = self.binder_name(variable);
                self.scope.push((variable.clone(), bound.clone()));
                let inner = self.emit(body);
                self.scope.pop();
                let inner = inner?;
                Ok(match (self.target, quantifier) {
                    (Target::SmtLib2, Quantifier::ForAll) => {
                        format!("(forall (({bound} {UNIVERSE_SORT})) {inner})")
                    }
                    (Target::SmtLib2, Quantifier::Exists) => {
                        format!("(exists (({bound} {UNIVERSE_SORT})) {inner})")
                    }
                    (Target::FolText, Quantifier::ForAll) => format!("{FORALL}{bound} ({inner})"),
                    (Target::FolText, Quantifier::Exists) => format!("{EXISTS}{bound} ({inner})"),
                })
            }
            Formula::Not(operand) => {
                let inner = self.emit(operand)?;
                Ok(match self.target {
                    Target::SmtLib2 => format!("(not {inner})"),
                    Target::FolText if is_binary(operand) => format!("{NOT}({inner})"),
                    Target::FolText => format!("{NOT}{inner}"),
                })
            }
            Formula::And(l, r) => self.binary(l, r, "and", AND),
            Formula::Or(l, r) => self.binary(l, r, "or", OR),
            Formula::Implies(l, r) => self.binary(l, r, "=>", IMPLIES),
        }
    }

    fn binary(&mut self, l: &Formula, r: &Formula, smt_op: &str, fol_op: &str) -> Result<String, CodegenError> {
        let left = self.emit(l)?;
        let right = self.emit(r)?;
        Ok(match self.target {
            Target::SmtLib2 => format!("({smt_op} {left} {right})"),
            Target::FolText => format!("{} {fol_op} {}", fol_operand(l, left), fol_operand(r, right)),
        })
    }
}

fn is_binary(f: &Formula) -> bool {
    matches!(f, Formula::And(..) | Formula::Or(..) | Formula::Implies(..))
}

fn fol_operand(f: &Formula, text: String) -> String {
    if is_binary(f) || matches!(f, Formula::Quantified { .. }) {
        format!("({text})")
    } else {
        text
    }
}

/// Second pass for a single formula.
///
/// Every constant and relation must be registered in `env`; variables must
/// be bound by a quantifier inside `f`.
pub fn generate_expression(f: &Formula, env: &DeclarationSet, target: Target) -> Result<String, CodegenError> {
    Emitter::new(env, target).emit(f)
}

/// Unicode rendering with minimal parentheses.
///
/// Binary operands and quantifier scopes are parenthesized, atoms are
/// bare: `(Student(Rina) ∧ Aware(Rina)) ∨ (¬Student(Rina) ∧ ¬Aware(Rina))`.
pub fn render_fol(f: &Formula) -> Result<String, CodegenError> {
    let env = collect_declarations([f])?;
    generate_expression(f, &env, Target::FolText)
}

fn declaration_lines(env: &DeclarationSet, symbols: &SymbolTable, target: Target) -> Vec<String> {
    match target {
        Target::SmtLib2 => {
            let mut lines = vec![format!("(declare-sort {UNIVERSE_SORT} 0)")];
            for c in &env.constants {
                let name = symbols.constant(c).expect("constant registered");
                lines.push(format!("(declare-const {name} {UNIVERSE_SORT})"));
            }
            for (r, arity) in &env.relations {
                let name = symbols.relation(r).expect("relation registered");
                let sorts = vec![UNIVERSE_SORT; *arity].join(" ");
                lines.push(format!("(declare-fun {name} ({sorts}) Bool)"));
            }
            lines
        }
        Target::FolText => {
            let mut lines: Vec<String> = env.constants.iter().map(|c| format!("constant {c}")).collect();
            lines.extend(env.relations.iter().map(|(r, a)| format!("relation {r}/{a}")));
            lines.extend(env.variables.iter().map(|v| format!("variable {v}")));
            lines
        }
    }
}

/// Compiles premises (and optionally a hypothesis) into a program.
///
/// In [`Mode::CheckEntails`] the negated hypothesis is asserted after the
/// premises and a `(check-sat)` query is appended for SMT-LIB; with no
/// hypothesis the program simply tests the premises for satisfiability.
pub fn compile_program(
    premises: &[Formula],
    hypothesis: Option<&Formula>,
    mode: Mode,
    target: Target,
) -> Result<TargetProgram, CodegenError> {
    let env = collect_declarations(premises.iter().chain(hypothesis))?;
    let mut emitter = Emitter::new(&env, target);

    let mut assertions = Vec::with_capacity(premises.len() + 1);
    let mut assert = |emitter: &mut Emitter, f: &Formula| -> Result<(), CodegenError> {
        let expr = emitter.emit(f)?;
        assertions.push(match target {
            Target::SmtLib2 => format!("(assert {expr})"),
            Target::FolText => expr,
        });
        Ok(())
    };
    for p in premises {
        assert(&mut emitter, p)?;
    }
    match (mode, hypothesis) {
        (Mode::Translate, Some(h)) => assert(&mut emitter, h)?,
        (Mode::CheckEntails, Some(h)) => assert(&mut emitter, &negate(h))?,
        (_, None) => {}
    }

    let query = match (mode, target) {
        (Mode::CheckEntails, Target::SmtLib2) => Some("(check-sat)".to_string()),
        _ => None,
    };
    Ok(TargetProgram {
        target,
        renames: emitter.symbols.renames.clone(),
        declarations: declaration_lines(&env, &emitter.symbols, target),
        assertions,
        query,
    })
}
