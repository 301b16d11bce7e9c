//! The first-order logic abstract syntax tree.
//!
//! The grammar is deliberately small: terms are variables or constants,
//! atomic formulas apply a relation to one, two or three terms, and the
//! only connectives are negation, conjunction, disjunction and implication.
//! There are no function symbols, no equality and a single universe sort.
//!
//! Values are plain owned trees. Construction never shares mutable state,
//! so a `Formula` is immutable once built and safe to send across threads.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AstError;

/// Whether a term names a bound variable or a constant individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TermKind {
    Variable,
    Constant,
}

/// A variable or constant argument of an atomic formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub kind: TermKind,
    pub name: String,
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term { kind: TermKind::Variable, name: name.into() }
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term { kind: TermKind::Constant, name: name.into() }
    }

    pub fn is_variable(&self) -> bool {
        self.kind == TermKind::Variable
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Relation applied to an ordered argument list.
///
/// The grammar admits 1, 2 or 3 arguments. The fields are public so that
/// decoders and generators can build trees freely; [`crate::validate`]
/// reports any atom whose argument count is out of range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub const MIN_ARITY: usize = 1;
    pub const MAX_ARITY: usize = 3;

    /// Checked constructor: rejects argument lists outside `1..=3`.
    pub fn new(relation: impl Into<String>, args: Vec<Term>) -> Result<Self, AstError> {
        let relation = relation.into();
        if !(Self::MIN_ARITY..=Self::MAX_ARITY).contains(&args.len()) {
            return Err(AstError::InvalidNode(format!(
                "relation {relation} applied to {} arguments (expected 1 to 3)",
                args.len()
            )));
        }
        Ok(Atom { relation, args })
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    ForAll,
    Exists,
}

impl Quantifier {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantifier::ForAll => "ForAll",
            Quantifier::Exists => "Exists",
        }
    }
}

/// The four connectives of the core grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
}

impl Connective {
    pub fn as_str(self) -> &'static str {
        match self {
            Connective::Not => "Not",
            Connective::And => "And",
            Connective::Or => "Or",
            Connective::Implies => "Implies",
        }
    }

    pub fn operand_count(self) -> usize {
        match self {
            Connective::Not => 1,
            _ => 2,
        }
    }
}

/// A first-order formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atomic(Atom),
    Quantified { quantifier: Quantifier, variable: String, body: Box<Formula> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Atomic formula; panics on an argument count outside `1..=3`.
    ///
    /// Intended for literals in code and tests. Use [`Atom::new`] for
    /// untrusted input.
    pub fn atom(relation: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atomic(Atom::new(relation, args).expect("atom arity out of range"))
    }

    pub fn forall(variable: impl Into<String>, body: Formula) -> Self {
        Formula::Quantified { quantifier: Quantifier::ForAll, variable: variable.into(), body: Box::new(body) }
    }

    pub fn exists(variable: impl Into<String>, body: Formula) -> Self {
        Formula::Quantified { quantifier: Quantifier::Exists, variable: variable.into(), body: Box::new(body) }
    }

    pub fn quantified(quantifier: Quantifier, variable: impl Into<String>, body: Formula) -> Self {
        Formula::Quantified { quantifier, variable: variable.into(), body: Box::new(body) }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(operand: Formula) -> Self {
        Formula::Not(Box::new(operand))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Implies(Box::new(left), Box::new(right))
    }

    /// Builds a logical node from a connective and its operand list.
    pub fn logical(op: Connective, operands: Vec<Formula>) -> Result<Self, AstError> {
        if operands.len() != op.operand_count() {
            return Err(AstError::InvalidNode(format!(
                "{} takes {} operand(s), got {}",
                op.as_str(),
                op.operand_count(),
                operands.len()
            )));
        }
        let mut it = operands.into_iter();
        let first = it.next().expect("checked length");
        Ok(match op {
            Connective::Not => Formula::not(first),
            Connective::And => Formula::and(first, it.next().expect("checked length")),
            Connective::Or => Formula::or(first, it.next().expect("checked length")),
            Connective::Implies => Formula::implies(first, it.next().expect("checked length")),
        })
    }

    /// The connective at the root, if this is a logical node.
    pub fn connective(&self) -> Option<Connective> {
        match self {
            Formula::Not(_) => Some(Connective::Not),
            Formula::And(..) => Some(Connective::And),
            Formula::Or(..) => Some(Connective::Or),
            Formula::Implies(..) => Some(Connective::Implies),
            _ => None,
        }
    }

    /// Immediate sub-formulas in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atomic(_) => vec![],
            Formula::Quantified { body, .. } => vec![body],
            Formula::Not(f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => vec![l, r],
        }
    }

    /// Number of formula nodes (terms excluded).
    pub fn node_count(&self) -> usize {
        1 + self.children().into_iter().map(Formula::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Formula::depth).max().unwrap_or(0)
    }

    /// Preorder walk over every atom in the tree.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Atomic(a) => out.push(a),
                other => {
                    let mut kids = other.children();
                    kids.reverse();
                    stack.extend(kids);
                }
            }
        }
        out
    }
}

/// Wraps `f` in a single negation. No simplification is performed: the
/// operand is returned unchanged under the new `Not` node.
pub fn negate(f: &Formula) -> Formula {
    Formula::not(f.clone())
}

/// Conditional connectives that the parser may emit but that the core
/// grammar does not contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtendedOp {
    If,
    OnlyIf,
    IfAndOnlyIf,
}

impl ExtendedOp {
    pub fn parse(tag: &str) -> Result<Self, AstError> {
        match tag {
            "If" => Ok(ExtendedOp::If),
            "OnlyIf" => Ok(ExtendedOp::OnlyIf),
            "IfAndOnlyIf" => Ok(ExtendedOp::IfAndOnlyIf),
            other => Err(AstError::InvalidNode(format!("unknown extended operator {other:?}"))),
        }
    }
}

/// `left op right` for one of the extended connectives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedConnective {
    pub op: ExtendedOp,
    pub left: Formula,
    pub right: Formula,
}

/// Rewrites an extended connective into the core connectives.
///
/// `P if-then Q` and `P only if Q` both become `P → Q` (in the latter, `Q`
/// is the necessary condition). The biconditional becomes
/// `(P → Q) ∧ (Q → P)`.
pub fn desugar(e: ExtendedConnective) -> Formula {
    let ExtendedConnective { op, left, right } = e;
    match op {
        ExtendedOp::If | ExtendedOp::OnlyIf => Formula::implies(left, right),
        ExtendedOp::IfAndOnlyIf => {
            Formula::and(Formula::implies(left.clone(), right.clone()), Formula::implies(right, left))
        }
    }
}

/// Desugars from a raw operator tag, rejecting unknown tags.
pub fn desugar_tagged(tag: &str, left: Formula, right: Formula) -> Result<Formula, AstError> {
    Ok(desugar(ExtendedConnective { op: ExtendedOp::parse(tag)?, left, right }))
}
