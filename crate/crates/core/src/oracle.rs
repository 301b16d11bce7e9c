//! Bounded finite-model oracle for entailment.
//!
//! The grammar has no function symbols and no equality, so for a fixed
//! domain size there are finitely many interpretations: one element per
//! constant and one truth table per relation. [`brute_force_entails`]
//! searches them for a countermodel (premises true, hypothesis false) at
//! every size up to a bound.
//!
//! The search enumerates constant assignments up to a permutation of the
//! domain (elements are interchangeable) and fills relation tables by
//! backtracking over ground atoms, cutting a branch as soon as a premise is
//! definitely false or the hypothesis definitely true under the partial
//! table (three-valued evaluation). Every cut discards only interpretations
//! that cannot be countermodels, so the search is exhaustive.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use serde::Serialize;

use crate::ast::{Formula, Quantifier, TermKind};
use crate::codegen::collect_declarations;
use crate::error::OracleError;

pub const DEFAULT_MAX_DOMAIN_SIZE: usize = 3;
pub const DEFAULT_INTERPRETATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_domain_size: usize,
    /// Maximum number of (partial) interpretations visited before giving up.
    pub cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_domain_size: DEFAULT_MAX_DOMAIN_SIZE, cap: DEFAULT_INTERPRETATION_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationTable {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite interpretation over the domain `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedModel {
    pub domain_size: usize,
    pub constant_assignment: IndexMap<String, usize>,
    pub relation_tables: IndexMap<String, RelationTable>,
}

impl BoundedModel {
    /// Standard first-order truth of a closed formula.
    pub fn evaluate(&self, f: &Formula) -> Result<bool, OracleError> {
        self.eval(f, &mut Vec::new())
    }

    fn eval(&self, f: &Formula, env: &mut Vec<(String, usize)>) -> Result<bool, OracleError> {
        Ok(match f {
            Formula::Atomic(atom) => {
                let table = self
                    .relation_tables
                    .get(&atom.relation)
                    .ok_or_else(|| OracleError::UnknownRelation(atom.relation.clone()))?;
                let tuple = atom
                    .args
                    .iter()
                    .map(|t| match t.kind {
                        TermKind::Variable => env
                            .iter()
                            .rev()
                            .find(|(name, _)| name == &t.name)
                            .map(|(_, v)| *v)
                            .ok_or_else(|| OracleError::UnboundVariable(t.name.clone())),
                        TermKind::Constant => self
                            .constant_assignment
                            .get(&t.name)
                            .copied()
                            .ok_or_else(|| OracleError::UnknownConstant(t.name.clone())),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                table.tuples.contains(&tuple)
            }
            Formula::Quantified { quantifier, variable, body } => {
                let mut result = *quantifier == Quantifier::ForAll;
                for element in 0..self.domain_size {
                    env.push((variable.clone(), element));
                    let value = self.eval(body, env);
                    env.pop();
                    let value = value?;
                    match quantifier {
                        Quantifier::ForAll if !value => {
                            result = false;
                            break;
                        }
                        Quantifier::Exists if value => {
                            result = true;
                            break;
                        }
                        _ => {}
                    }
                }
                result
            }
            Formula::Not(g) => !self.eval(g, env)?,
            Formula::And(l, r) => self.eval(l, env)? && self.eval(r, env)?,
            Formula::Or(l, r) => self.eval(l, env)? || self.eval(r, env)?,
            Formula::Implies(l, r) => !self.eval(l, env)? || self.eval(r, env)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceVerdict {
    /// No countermodel exists at any domain size up to the bound.
    pub entailed: bool,
    pub countermodel: Option<BoundedModel>,
    /// Partial and complete interpretations visited.
    pub explored: u64,
}

/// Searches for a model of `premises` that falsifies `hypothesis` over
/// domains of size `1..=config.max_domain_size`.
pub fn brute_force_entails(
    premises: &[Formula],
    hypothesis: &Formula,
    config: OracleConfig,
) -> Result<BruteForceVerdict, OracleError> {
    let decls = collect_declarations(premises.iter().chain([hypothesis]))?;
    let constants: Vec<String> = decls.constants.iter().cloned().collect();
    let relations: Vec<(String, usize)> = decls.relations.iter().map(|(k, v)| (k.clone(), *v)).collect();

    let compile = |f: &Formula| Compiler::new(&constants, &relations).compile(f);
    let mut constraints = premises.iter().map(|p| Ok((compile(p)?, true))).collect::<Result<Vec<_>, OracleError>>()?;
    constraints.push((compile(hypothesis)?, false));

    let mut explored = 0u64;
    for domain_size in 1..=config.max_domain_size {
        let mut search = Search::new(domain_size, &relations, &constraints, config.cap, explored);
        let mut assignment = vec![0usize; constants.len()];
        let found = search.constants(0, 0, &mut assignment)?;
        explored = search.explored;
        if let Some((consts, atoms)) = found {
            let model = search.model(&constants, &consts, &atoms);
            return Ok(BruteForceVerdict { entailed: false, countermodel: Some(model), explored });
        }
    }
    Ok(BruteForceVerdict { entailed: true, countermodel: None, explored })
}

/// Formula with names resolved to indices.
#[derive(Debug)]
enum Ir {
    Atom { relation: usize, args: Vec<Arg> },
    Quant { forall: bool, slot: usize, body: Box<Ir> },
    Not(Box<Ir>),
    And(Box<Ir>, Box<Ir>),
    Or(Box<Ir>, Box<Ir>),
    Implies(Box<Ir>, Box<Ir>),
}

#[derive(Debug, Clone, Copy)]
enum Arg {
    Constant(usize),
    /// Index into the quantifier-slot stack.
    Slot(usize),
}

struct Compiler<'a> {
    constants: &'a [String],
    relations: &'a [(String, usize)],
    scope: Vec<String>,
}

impl<'a> Compiler<'a> {
    fn new(constants: &'a [String], relations: &'a [(String, usize)]) -> Self {
        Compiler { constants, relations, scope: Vec::new() }
    }

    fn compile(mut self, f: &Formula) -> Result<Ir, OracleError> {
        self.ir(f)
    }

    fn ir(&mut self, f: &Formula) -> Result<Ir, OracleError> {
        Ok(match f {
            Formula::Atomic(atom) => {
                let relation = self
                    .relations
                    .iter()
                    .position(|(name, _)| name == &atom.relation)
                    .ok_or_else(|| OracleError::UnknownRelation(atom.relation.clone()))?;
                let args = atom
                    .args
                    .iter()
                    .map(|t| match t.kind {
                        TermKind::Variable => self
                            .scope
                            .iter()
                            .rposition(|v| v == &t.name)
                            .map(Arg::Slot)
                            .ok_or_else(|| OracleError::UnboundVariable(t.name.clone())),
                        TermKind::Constant => self
                            .constants
                            .iter()
                            .position(|c| c == &t.name)
                            .map(Arg::Constant)
                            .ok_or_else(|| OracleError::UnknownConstant(t.name.clone())),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ir::Atom { relation, args }
            }
            Formula::Quantified { quantifier, variable, body } => {
                let slot = self.scope.len();
                self.scope.push(variable.clone());
                let body = self.ir(body);
                self.scope.pop();
                Ir::Quant { forall: *quantifier == Quantifier::ForAll, slot, body: Box::new(body?) }
            }
            Formula::Not(g) => Ir::Not(Box::new(self.ir(g)?)),
            Formula::And(l, r) => Ir::And(Box::new(self.ir(l)?), Box::new(self.ir(r)?)),
            Formula::Or(l, r) => Ir::Or(Box::new(self.ir(l)?), Box::new(self.ir(r)?)),
            Formula::Implies(l, r) => Ir::Implies(Box::new(self.ir(l)?), Box::new(self.ir(r)?)),
        })
    }
}

/// Kleene three-valued truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tv {
    True,
    False,
    Open,
}

impl Tv {
    fn not(self) -> Tv {
        match self {
            Tv::True => Tv::False,
            Tv::False => Tv::True,
            Tv::Open => Tv::Open,
        }
    }
}

type Found = Option<(Vec<usize>, Vec<Option<bool>>)>;

struct Search<'a> {
    domain_size: usize,
    /// First ground-atom index of each relation.
    offsets: Vec<usize>,
    arities: Vec<usize>,
    relations: &'a [(String, usize)],
    constraints: &'a [(Ir, bool)],
    atoms: Vec<Option<bool>>,
    cap: u64,
    explored: u64,
}

impl<'a> Search<'a> {
    fn new(
        domain_size: usize,
        relations: &'a [(String, usize)],
        constraints: &'a [(Ir, bool)],
        cap: u64,
        explored: u64,
    ) -> Self {
        let mut offsets = Vec::with_capacity(relations.len());
        let mut total = 0;
        for (_, arity) in relations {
            offsets.push(total);
            total += domain_size.pow(*arity as u32);
        }
        Search {
            domain_size,
            offsets,
            arities: relations.iter().map(|(_, a)| *a).collect(),
            relations,
            constraints,
            atoms: vec![None; total],
            cap,
            explored,
        }
    }

    /// Constant assignments as restricted-growth strings: constant `i` maps
    /// to at most one more than the largest element used so far.
    fn constants(&mut self, index: usize, used: usize, assignment: &mut Vec<usize>) -> Result<Found, OracleError> {
        if index == assignment.len() {
            return self.tables(assignment);
        }
        let limit = (used + 1).min(self.domain_size);
        for element in 0..limit {
            assignment[index] = element;
            let found = self.constants(index + 1, used.max(element + 1), assignment)?;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn tables(&mut self, consts: &[usize]) -> Result<Found, OracleError> {
        self.explored += 1;
        if self.explored > self.cap {
            return Err(OracleError::BudgetExceeded { cap: self.cap, domain_size: self.domain_size });
        }
        let mut branch = None;
        let mut all_settled = true;
        let mut env = vec![0usize; 16];
        for (ir, want) in self.constraints {
            let mut open_atom = None;
            let value = self.eval(ir, consts, &mut env, &mut open_atom);
            match (value, want) {
                (Tv::True, true) | (Tv::False, false) => {}
                (Tv::Open, _) => {
                    all_settled = false;
                    if branch.is_none() {
                        branch = open_atom;
                    }
                }
                _ => return Ok(None),
            }
        }
        if all_settled {
            return Ok(Some((consts.to_vec(), self.atoms.clone())));
        }
        let atom = branch.expect("an open constraint touches an unassigned atom");
        for value in [true, false] {
            self.atoms[atom] = Some(value);
            let found = self.tables(consts)?;
            if found.is_some() {
                self.atoms[atom] = None;
                return Ok(found);
            }
        }
        self.atoms[atom] = None;
        Ok(None)
    }

    fn atom_index(&self, relation: usize, args: &[Arg], consts: &[usize], env: &[usize]) -> usize {
        let mut index = 0;
        for arg in args {
            let element = match *arg {
                Arg::Constant(c) => consts[c],
                Arg::Slot(s) => env[s],
            };
            index = index * self.domain_size + element;
        }
        self.offsets[relation] + index
    }

    fn eval(&self, ir: &Ir, consts: &[usize], env: &mut Vec<usize>, open: &mut Option<usize>) -> Tv {
        match ir {
            Ir::Atom { relation, args } => {
                let idx = self.atom_index(*relation, args, consts, env);
                match self.atoms[idx] {
                    Some(true) => Tv::True,
                    Some(false) => Tv::False,
                    None => {
                        open.get_or_insert(idx);
                        Tv::Open
                    }
                }
            }
            Ir::Quant { forall, slot, body } => {
                if env.len() <= *slot {
                    env.resize(slot + 1, 0);
                }
                let (stop, done) = if *forall { (Tv::False, Tv::True) } else { (Tv::True, Tv::False) };
                let mut result = done;
                for element in 0..self.domain_size {
                    env[*slot] = element;
                    let v = self.eval(body, consts, env, open);
                    if v == stop {
                        return stop;
                    }
                    if v == Tv::Open {
                        result = Tv::Open;
                    }
                }
                result
            }
            Ir::Not(g) => self.eval(g, consts, env, open).not(),
            Ir::And(l, r) => match self.eval(l, consts, env, open) {
                Tv::False => Tv::False,
                lv => match (lv, self.eval(r, consts, env, open)) {
                    (_, Tv::False) => Tv::False,
                    (Tv::True, Tv::True) => Tv::True,
                    _ => Tv::Open,
                },
            },
            Ir::Or(l, r) => match self.eval(l, consts, env, open) {
                Tv::True => Tv::True,
                lv => match (lv, self.eval(r, consts, env, open)) {
                    (_, Tv::True) => Tv::True,
                    (Tv::False, Tv::False) => Tv::False,
                    _ => Tv::Open,
                },
            },
            Ir::Implies(l, r) => match self.eval(l, consts, env, open) {
                Tv::False => Tv::True,
                lv => match (lv, self.eval(r, consts, env, open)) {
                    (_, Tv::True) => Tv::True,
                    (Tv::True, Tv::False) => Tv::False,
                    _ => Tv::Open,
                },
            },
        }
    }

    /// Materializes a model; atoms left open did not matter and read as false.
    fn model(&self, constants: &[String], consts: &[usize], atoms: &[Option<bool>]) -> BoundedModel {
        let constant_assignment = constants.iter().cloned().zip(consts.iter().copied()).collect();
        let mut relation_tables = IndexMap::new();
        for (r, (name, arity)) in self.relations.iter().enumerate() {
            let count = self.domain_size.pow(*arity as u32);
            let tuples = (0..count)
                .filter(|i| atoms[self.offsets[r] + i] == Some(true))
                .map(|mut i| {
                    let mut tuple = vec![0; self.arities[r]];
                    for slot in tuple.iter_mut().rev() {
                        *slot = i % self.domain_size;
                        i /= self.domain_size;
                    }
                    tuple
                })
                .collect();
            relation_tables.insert(name.clone(), RelationTable { arity: *arity, tuples });
        }
        BoundedModel { domain_size: self.domain_size, constant_assignment, relation_tables }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Term;
    use crate::samples;

    fn p(c: &str) -> Formula {
        Formula::atom("P", vec![Term::constant(c)])
    }

    fn model(size: usize, consts: &[(&str, usize)], tables: &[(&str, usize, &[&[usize]])]) -> BoundedModel {
        BoundedModel {
            domain_size: size,
            constant_assignment: consts.iter().map(|(c, e)| (c.to_string(), *e)).collect(),
            relation_tables: tables
                .iter()
                .map(|(r, arity, tuples)| {
                    (
                        r.to_string(),
                        RelationTable { arity: *arity, tuples: tuples.iter().map(|t| t.to_vec()).collect() },
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn hand_evaluated_cases() {
        // domain {0,1}; Rina = 0; Student = {0}; Aware = {}
        let m = model(2, &[("Rina", 0)], &[("Student", 1, &[&[0]]), ("Aware", 1, &[])]);
        let student = Formula::atom("Student", vec![Term::constant("Rina")]);
        let aware = Formula::atom("Aware", vec![Term::constant("Rina")]);
        assert!(m.evaluate(&student).unwrap());
        assert!(!m.evaluate(&aware).unwrap());
        assert!(!m.evaluate(&samples::rina_disjunction()).unwrap());
        assert!(m.evaluate(&Formula::implies(aware.clone(), student.clone())).unwrap());
        assert!(!m.evaluate(&Formula::implies(student.clone(), aware.clone())).unwrap());

        let some_student = Formula::exists("x", Formula::atom("Student", vec![Term::var("x")]));
        let all_students = Formula::forall("x", Formula::atom("Student", vec![Term::var("x")]));
        assert!(m.evaluate(&some_student).unwrap());
        assert!(!m.evaluate(&all_students).unwrap());
    }

    #[test]
    fn binary_relation_and_shadowing() {
        // Love = {(0,1),(1,1)}: everyone loves 1
        let m = model(2, &[], &[("Love", 2, &[&[0, 1], &[1, 1]])]);
        let love = |a: &str, b: &str| Formula::atom("Love", vec![Term::var(a), Term::var(b)]);
        let exists_loved_by_all = Formula::exists("y", Formula::forall("x", love("x", "y")));
        let all_love_self = Formula::forall("x", love("x", "x"));
        assert!(m.evaluate(&exists_loved_by_all).unwrap());
        assert!(!m.evaluate(&all_love_self).unwrap());
        // ∀x ∃x Love(x, x): the inner binder shadows the outer one
        let shadow = Formula::forall("x", Formula::exists("x", love("x", "x")));
        assert!(m.evaluate(&shadow).unwrap());
    }

    #[test]
    fn evaluation_errors() {
        let m = model(1, &[], &[("P", 1, &[])]);
        assert_eq!(m.evaluate(&p("A")), Err(OracleError::UnknownConstant("A".into())));
        let free = Formula::atom("P", vec![Term::var("x")]);
        assert_eq!(m.evaluate(&free), Err(OracleError::UnboundVariable("x".into())));
    }

    #[test]
    fn socrates_is_entailed() {
        let v = brute_force_entails(
            &samples::socrates_premises(),
            &samples::mortal_socrates(),
            OracleConfig { max_domain_size: 2, ..Default::default() },
        )
        .unwrap();
        assert!(v.entailed);
        assert!(v.countermodel.is_none());
    }

    #[test]
    fn student_does_not_entail_aware() {
        let student = Formula::atom("Student", vec![Term::constant("Rina")]);
        let aware = Formula::atom("Aware", vec![Term::constant("Rina")]);
        let v = brute_force_entails(
            std::slice::from_ref(&student),
            &aware,
            OracleConfig { max_domain_size: 1, ..Default::default() },
        )
        .unwrap();
        assert!(!v.entailed);
        let m = v.countermodel.unwrap();
        assert_eq!(m.domain_size, 1);
        assert!(m.evaluate(&student).unwrap());
        assert!(!m.evaluate(&aware).unwrap());
        assert!(m.relation_tables["Aware"].tuples.is_empty());
    }

    #[test]
    fn exists_does_not_entail_forall() {
        let px = || Formula::atom("P", vec![Term::var("x")]);
        let some = Formula::exists("x", px());
        let all = Formula::forall("x", px());
        let v = brute_force_entails(
            std::slice::from_ref(&some),
            &all,
            OracleConfig { max_domain_size: 2, ..Default::default() },
        )
        .unwrap();
        assert!(!v.entailed);
        let m = v.countermodel.unwrap();
        assert_eq!(m.domain_size, 2);
        assert_eq!(m.relation_tables["P"].tuples.len(), 1);
        assert!(m.evaluate(&some).unwrap() && !m.evaluate(&all).unwrap());

        // and it needs two elements
        let v = brute_force_entails(&[some], &all, OracleConfig { max_domain_size: 1, ..Default::default() }).unwrap();
        assert!(v.entailed);
    }

    #[test]
    fn contradictory_premises_entail_anything() {
        let v = brute_force_entails(
            &[p("A"), Formula::not(p("A"))],
            &Formula::atom("Q", vec![Term::constant("B")]),
            OracleConfig::default(),
        )
        .unwrap();
        assert!(v.entailed);
    }

    #[test]
    fn budget_is_enforced() {
        let v = brute_force_entails(
            &samples::socrates_premises(),
            &samples::mortal_socrates(),
            OracleConfig { max_domain_size: 3, cap: 2 },
        );
        assert!(matches!(v, Err(OracleError::BudgetExceeded { cap: 2, .. })));
    }

    /// Plain enumeration of every interpretation, used to cross-check the
    /// pruned search on small signatures.
    fn naive_countermodel_exists(premises: &[Formula], h: &Formula, size: usize) -> bool {
        let decls = collect_declarations(premises.iter().chain([h])).unwrap();
        let consts: Vec<_> = decls.constants.iter().cloned().collect();
        let rels: Vec<_> = decls.relations.iter().map(|(k, v)| (k.clone(), *v)).collect();
        let cells: Vec<(usize, Vec<usize>)> = rels
            .iter()
            .enumerate()
            .flat_map(|(r, (_, arity))| {
                let count = size.pow(*arity as u32);
                (0..count).map(move |mut i| {
                    let mut t = vec![0; *arity];
                    for s in t.iter_mut().rev() {
                        *s = i % size;
                        i /= size;
                    }
                    (r, t)
                })
            })
            .collect();
        let const_count = size.pow(consts.len() as u32);
        for c in 0..const_count {
            let mut rest = c;
            let assignment: IndexMap<String, usize> = consts
                .iter()
                .map(|name| {
                    let e = rest % size;
                    rest /= size;
                    (name.clone(), e)
                })
                .collect();
            for bits in 0u64..(1u64 << cells.len()) {
                let mut tables: IndexMap<String, RelationTable> = rels
                    .iter()
                    .map(|(n, a)| (n.clone(), RelationTable { arity: *a, tuples: BTreeSet::new() }))
                    .collect();
                for (i, (r, t)) in cells.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        tables[*r].tuples.insert(t.clone());
                    }
                }
                let m = BoundedModel {
                    domain_size: size,
                    constant_assignment: assignment.clone(),
                    relation_tables: tables,
                };
                if premises.iter().all(|p| m.evaluate(p).unwrap()) && !m.evaluate(h).unwrap() {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn pruned_search_matches_naive_enumeration() {
        use crate::generate::{FormulaGenerator, SignatureSpec};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let spec = SignatureSpec { max_constants: 2, max_relations: 2, max_arity: 2, max_depth: 4, max_premises: 2 };
        for _ in 0..150 {
            let gen = FormulaGenerator::random(&mut rng, &spec);
            let (premises, h) = gen.instance(&mut rng);
            for size in 1..=2 {
                let v =
                    brute_force_entails(&premises, &h, OracleConfig { max_domain_size: size, cap: u64::MAX }).unwrap();
                let naive = (1..=size).any(|s| naive_countermodel_exists(&premises, &h, s));
                assert_eq!(!v.entailed, naive, "premises {premises:?} hypothesis {h:?} size {size}");
                if let Some(m) = v.countermodel {
                    assert!(premises.iter().all(|p| m.evaluate(p).unwrap()));
                    assert!(!m.evaluate(&h).unwrap());
                }
            }
        }
    }
}
