//! Well-formedness checks and symbol analysis.

use std::collections::BTreeSet;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use crate::ast::{Atom, Formula, Term, TermKind};
use crate::codegen::DeclarationSet;
use crate::error::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaultCode {
    UnboundVariable,
    ArityMismatch,
    EmptyName,
    BadArgCount,
    /// One identifier used both as a relation and as a constant.
    NameCollision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub code: FaultCode,
    /// Location as a pointer into the canonical document, e.g. `#/body/operands/0`.
    pub path: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellFormednessReport {
    pub ok: bool,
    pub free_variables: BTreeSet<String>,
    pub signature: IndexMap<String, usize>,
    pub faults: Vec<Fault>,
}

/// Symbols a formula would declare: constants, bound variables and the
/// relation signature, each deduplicated in first-encounter order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Analysis {
    pub constants: IndexSet<String>,
    pub bound_variables: IndexSet<String>,
    pub signature: IndexMap<String, usize>,
}

struct Checker<'a> {
    context: Option<&'a DeclarationSet>,
    signature: IndexMap<String, usize>,
    constants: IndexSet<String>,
    free: BTreeSet<String>,
    faults: Vec<Fault>,
}

impl<'a> Checker<'a> {
    fn new(context: Option<&'a DeclarationSet>) -> Self {
        Checker {
            context,
            signature: IndexMap::new(),
            constants: IndexSet::new(),
            free: BTreeSet::new(),
            faults: Vec::new(),
        }
    }

    fn fault(&mut self, code: FaultCode, path: &str, detail: String) {
        self.faults.push(Fault { code, path: path.to_string(), detail });
    }

    fn formula(&mut self, f: &Formula, path: &str, scope: &mut Vec<String>) {
        match f {
            Formula::Atomic(atom) => self.atom(atom, path, scope),
            Formula::Quantified { variable, body, .. } => {
                if variable.trim().is_empty() {
                    self.fault(FaultCode::EmptyName, path, "quantifier binds an empty variable name".into());
                }
                scope.push(variable.clone());
                self.formula(body, &format!("{path}/body"), scope);
                scope.pop();
            }
            other => {
                for (i, child) in other.children().into_iter().enumerate() {
                    self.formula(child, &format!("{path}/operands/{i}"), scope);
                }
            }
        }
    }

    fn atom(&mut self, atom: &Atom, path: &str, scope: &[String]) {
        let name = atom.relation.trim();
        let arity = atom.args.len();
        if name.is_empty() {
            self.fault(FaultCode::EmptyName, path, "relation name is empty".into());
        }
        if !(Atom::MIN_ARITY..=Atom::MAX_ARITY).contains(&arity) {
            self.fault(
                FaultCode::BadArgCount,
                path,
                format!("relation {name} has {arity} arguments (expected 1 to 3)"),
            );
        }
        if !name.is_empty() {
            self.register_relation(name, arity, path);
        }
        for (i, term) in atom.args.iter().enumerate() {
            self.term(term, &format!("{path}/args/{i}"), scope);
        }
    }

    fn register_relation(&mut self, name: &str, arity: usize, path: &str) {
        if let Some(expected) = self.context.and_then(|c| c.relation_arity(name)) {
            if expected != arity {
                self.fault(
                    FaultCode::ArityMismatch,
                    path,
                    format!("relation {name} is declared with arity {expected} but used with {arity}"),
                );
            }
        }
        match self.signature.get(name) {
            Some(&seen) if seen != arity => self.fault(
                FaultCode::ArityMismatch,
                path,
                format!("relation {name} used with arity {seen} and {arity}"),
            ),
            Some(_) => {}
            None => {
                self.signature.insert(name.to_string(), arity);
            }
        }
    }

    fn term(&mut self, term: &Term, path: &str, scope: &[String]) {
        let name = term.name.trim();
        if name.is_empty() {
            let what = match term.kind {
                TermKind::Variable => "variable",
                TermKind::Constant => "constant",
            };
            self.fault(FaultCode::EmptyName, path, format!("{what} name is empty"));
            return;
        }
        match term.kind {
            TermKind::Variable => {
                if !scope.iter().any(|v| v == &term.name) {
                    self.free.insert(term.name.clone());
                    self.fault(
                        FaultCode::UnboundVariable,
                        path,
                        format!("variable {name} is not bound by an enclosing quantifier"),
                    );
                }
            }
            TermKind::Constant => {
                self.constants.insert(name.to_string());
            }
        }
    }

    /// Relation/constant clashes are only known once the whole input is seen.
    fn check_collisions(&mut self) {
        let mut relations: IndexSet<&str> = self.signature.keys().map(String::as_str).collect();
        let mut constants: IndexSet<&str> = self.constants.iter().map(String::as_str).collect();
        if let Some(ctx) = self.context {
            relations.extend(ctx.relations.keys().map(String::as_str));
            constants.extend(ctx.constants.iter().map(String::as_str));
        }
        let clashes: Vec<String> = relations.iter().filter(|r| constants.contains(*r)).map(|r| r.to_string()).collect();
        for name in clashes {
            self.fault(FaultCode::NameCollision, "#", format!("{name} is used both as a relation and as a constant"));
        }
    }

    fn finish(mut self) -> WellFormednessReport {
        self.check_collisions();
        WellFormednessReport {
            ok: self.faults.is_empty(),
            free_variables: self.free,
            signature: self.signature,
            faults: self.faults,
        }
    }
}

/// Checks `f` against the grammar, variable scoping and a single relation
/// signature (optionally shared with `context`). Faults are data: the
/// report lists every problem found rather than stopping at the first.
pub fn validate(f: &Formula, context: Option<&DeclarationSet>) -> WellFormednessReport {
    let mut checker = Checker::new(context);
    checker.formula(f, "#", &mut Vec::new());
    checker.finish()
}

/// Joint validation of several formulas sharing one signature. Fault paths
/// are prefixed with the formula index, e.g. `#3/operands/0`.
pub fn validate_all(formulas: &[Formula], context: Option<&DeclarationSet>) -> WellFormednessReport {
    let mut checker = Checker::new(context);
    for (i, f) in formulas.iter().enumerate() {
        checker.formula(f, &format!("#{i}"), &mut Vec::new());
    }
    checker.finish()
}

/// Collects the symbols of a well-formed formula.
pub fn analyze(f: &Formula) -> Result<Analysis, AnalysisError> {
    let report = validate(f, None);
    if !report.ok {
        return Err(AnalysisError::ContractViolation(Box::new(report)));
    }
    let mut out = Analysis::default();
    collect(f, &mut out);
    Ok(out)
}

fn collect(f: &Formula, out: &mut Analysis) {
    match f {
        Formula::Atomic(atom) => {
            out.signature.entry(atom.relation.clone()).or_insert(atom.args.len());
            for t in &atom.args {
                if t.kind == TermKind::Constant {
                    out.constants.insert(t.name.clone());
                }
            }
        }
        Formula::Quantified { variable, body, .. } => {
            out.bound_variables.insert(variable.clone());
            collect(body, out);
        }
        other => other.children().into_iter().for_each(|c| collect(c, out)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn codes(r: &WellFormednessReport) -> Vec<FaultCode> {
        r.faults.iter().map(|f| f.code).collect()
    }

    #[test]
    fn drink_rule_is_well_formed() {
        let r = validate(&samples::caffeine_rule(), None);
        assert!(r.ok, "{:?}", r.faults);
        assert_eq!(r.signature.get("Drink"), Some(&1));
        assert_eq!(r.signature.get("Dependent"), Some(&1));
        assert!(r.free_variables.is_empty());
    }

    #[test]
    fn unbound_variable_is_reported() {
        let f = Formula::atom("Drink", vec![Term::var("x")]);
        let r = validate(&f, None);
        assert!(!r.ok);
        assert_eq!(codes(&r), [FaultCode::UnboundVariable]);
        assert!(r.free_variables.contains("x"));
        assert_eq!(r.faults[0].path, "#/args/0");
    }

    #[test]
    fn arity_mismatch_within_formula() {
        let f = Formula::and(
            Formula::atom("Love", vec![Term::constant("Alice")]),
            Formula::atom("Love", vec![Term::constant("Alice"), Term::constant("Bob")]),
        );
        let r = validate(&f, None);
        assert_eq!(codes(&r), [FaultCode::ArityMismatch]);
        assert_eq!(r.faults[0].path, "#/operands/1");
    }

    #[test]
    fn arity_mismatch_against_context() {
        let mut ctx = DeclarationSet::default();
        ctx.relations.insert("Love".into(), 2);
        let f = Formula::atom("Love", vec![Term::constant("Alice")]);
        let r = validate(&f, Some(&ctx));
        assert_eq!(codes(&r), [FaultCode::ArityMismatch]);
    }

    #[test]
    fn empty_names_and_bad_counts() {
        let f = Formula::Atomic(Atom { relation: " ".into(), args: vec![] });
        let r = validate(&f, None);
        assert_eq!(codes(&r), [FaultCode::EmptyName, FaultCode::BadArgCount]);

        let f = Formula::forall("", Formula::atom("P", vec![Term::constant("")]));
        let r = validate(&f, None);
        assert_eq!(codes(&r), [FaultCode::EmptyName, FaultCode::EmptyName]);
    }

    #[test]
    fn relation_constant_collision() {
        let f = Formula::and(
            Formula::atom("Book", vec![Term::constant("Alice")]),
            Formula::atom("Read", vec![Term::constant("Alice"), Term::constant("Book")]),
        );
        let r = validate(&f, None);
        assert_eq!(codes(&r), [FaultCode::NameCollision]);
    }

    #[test]
    fn shadowed_variable_is_bound() {
        let f = Formula::forall("x", Formula::exists("x", Formula::atom("P", vec![Term::var("x")])));
        assert!(validate(&f, None).ok);
    }

    #[test]
    fn analyze_disjunction_formula() {
        let a = analyze(&samples::rina_disjunction()).unwrap();
        assert_eq!(a.constants.iter().collect::<Vec<_>>(), ["Rina"]);
        assert_eq!(
            a.signature.iter().map(|(k, v)| (k.as_str(), *v)).collect::<Vec<_>>(),
            [("Student", 1), ("Aware", 1)]
        );
        assert!(a.bound_variables.is_empty());
    }

    #[test]
    fn analyze_quantified_rule() {
        let a = analyze(&samples::caffeine_rule()).unwrap();
        assert_eq!(a.bound_variables.iter().collect::<Vec<_>>(), ["x"]);
        assert!(a.constants.is_empty());
    }

    #[test]
    fn analyze_deduplicates() {
        let p = Formula::atom("P", vec![Term::constant("A")]);
        let a = analyze(&Formula::and(p.clone(), p)).unwrap();
        assert_eq!(a.constants.len(), 1);
        assert_eq!(a.signature.len(), 1);
    }

    #[test]
    fn analyze_rejects_invalid_input() {
        let f = Formula::atom("Drink", vec![Term::var("x")]);
        assert!(matches!(analyze(&f), Err(AnalysisError::ContractViolation(r)) if !r.ok));
    }

    #[test]
    fn validate_all_shares_signature() {
        let a = Formula::atom("Love", vec![Term::constant("Alice")]);
        let b = Formula::atom("Love", vec![Term::constant("Alice"), Term::constant("Bob")]);
        let r = validate_all(&[a, b], None);
        assert_eq!(codes(&r), [FaultCode::ArityMismatch]);
        assert_eq!(r.faults[0].path, "#1");
    }
}
