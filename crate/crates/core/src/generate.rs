//! Random well-formed formulas over a random signature.
//!
//! Used by property tests and the conformance/oracle suites. Formulas are
//! closed (every variable is bound), arities are consistent across
//! everything produced by one generator, and quantifiers draw their
//! variable from `x`, `y`, `z`, so nested binders regularly reuse a letter.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::ast::{Formula, Quantifier, Term};

const CONSTANT_NAMES: [&str; 6] = ["Alice", "Bob", "Carol", "Dave", "Erin", "Frank"];
const RELATION_NAMES: [&str; 8] = ["P", "Q", "R", "S", "Likes", "Tall", "Gives", "Near"];
const VARIABLES: [&str; 3] = ["x", "y", "z"];

/// Bounds for a random signature and the formulas drawn over it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureSpec {
    pub max_constants: usize,
    pub max_relations: usize,
    pub max_arity: usize,
    /// Bound on [`Formula::depth`].
    pub max_depth: usize,
    pub max_premises: usize,
}

impl Default for SignatureSpec {
    fn default() -> Self {
        SignatureSpec { max_constants: 3, max_relations: 4, max_arity: 3, max_depth: 6, max_premises: 3 }
    }
}

#[derive(Debug, Clone)]
pub struct FormulaGenerator {
    pub constants: Vec<String>,
    pub relations: Vec<(String, usize)>,
    pub max_depth: usize,
    pub max_premises: usize,
}

impl FormulaGenerator {
    /// Draws a signature with at least one constant and one relation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, spec: &SignatureSpec) -> Self {
        let n_constants = rng.random_range(1..=spec.max_constants.clamp(1, CONSTANT_NAMES.len()));
        let n_relations = rng.random_range(1..=spec.max_relations.clamp(1, RELATION_NAMES.len()));
        let max_arity = spec.max_arity.clamp(1, 3);
        FormulaGenerator {
            constants: CONSTANT_NAMES[..n_constants].iter().map(|s| s.to_string()).collect(),
            relations: RELATION_NAMES[..n_relations]
                .iter()
                .map(|s| (s.to_string(), rng.random_range(1..=max_arity)))
                .collect(),
            max_depth: spec.max_depth.max(1),
            max_premises: spec.max_premises.max(1),
        }
    }

    /// A closed formula of depth at most `max_depth`.
    pub fn formula<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        let depth = rng.random_range(1..=self.max_depth);
        self.node(rng, depth, &mut Vec::new())
    }

    /// Premises (at least one) and a hypothesis over the shared signature.
    pub fn instance<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<Formula>, Formula) {
        let n = rng.random_range(1..=self.max_premises);
        let premises = (0..n).map(|_| self.formula(rng)).collect();
        (premises, self.formula(rng))
    }

    fn node<R: Rng + ?Sized>(&self, rng: &mut R, budget: usize, scope: &mut Vec<String>) -> Formula {
        if budget <= 1 {
            return self.atom(rng, scope);
        }
        match rng.random_range(0..10) {
            0 | 1 => self.atom(rng, scope),
            2 => Formula::not(self.node(rng, budget - 1, scope)),
            3 => Formula::and(self.node(rng, budget - 1, scope), self.node(rng, budget - 1, scope)),
            4 => Formula::or(self.node(rng, budget - 1, scope), self.node(rng, budget - 1, scope)),
            5 | 6 => Formula::implies(self.node(rng, budget - 1, scope), self.node(rng, budget - 1, scope)),
            _ => {
                let variable = VARIABLES.choose(rng).expect("non-empty").to_string();
                let quantifier = if rng.random_bool(0.5) { Quantifier::ForAll } else { Quantifier::Exists };
                scope.push(variable.clone());
                let body = self.node(rng, budget - 1, scope);
                scope.pop();
                Formula::quantified(quantifier, variable, body)
            }
        }
    }

    fn atom<R: Rng + ?Sized>(&self, rng: &mut R, scope: &[String]) -> Formula {
        let (name, arity) = self.relations.choose(rng).expect("non-empty signature");
        let args = (0..*arity)
            .map(|_| {
                if !scope.is_empty() && rng.random_bool(0.6) {
                    Term::var(scope.choose(rng).expect("non-empty scope").clone())
                } else {
                    Term::constant(self.constants.choose(rng).expect("non-empty constants").clone())
                }
            })
            .collect();
        Formula::atom(name.clone(), args)
    }
}
