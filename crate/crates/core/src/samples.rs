//! Small hand-built formulas used by tests, docs and the CLI fixtures.

use crate::ast::{Formula, Term};

fn unary(relation: &str, term: Term) -> Formula {
    Formula::atom(relation, vec![term])
}

/// `(Student(Rina) ∧ Aware(Rina)) ∨ (¬Student(Rina) ∧ ¬Aware(Rina))`
pub fn rina_disjunction() -> Formula {
    let rina = || Term::constant("Rina");
    Formula::or(
        Formula::and(unary("Student", rina()), unary("Aware", rina())),
        Formula::and(Formula::not(unary("Student", rina())), Formula::not(unary("Aware", rina()))),
    )
}

/// `∀x (Drink(x) → Dependent(x))`
pub fn caffeine_rule() -> Formula {
    Formula::forall("x", Formula::implies(unary("Drink", Term::var("x")), unary("Dependent", Term::var("x"))))
}

/// `∀x (Human(x) → Mortal(x))`
pub fn all_humans_mortal() -> Formula {
    Formula::forall("x", Formula::implies(unary("Human", Term::var("x")), unary("Mortal", Term::var("x"))))
}

pub fn human_socrates() -> Formula {
    unary("Human", Term::constant("Socrates"))
}

pub fn mortal_socrates() -> Formula {
    unary("Mortal", Term::constant("Socrates"))
}

/// Premises of the classic syllogism.
pub fn socrates_premises() -> Vec<Formula> {
    vec![all_humans_mortal(), human_socrates()]
}
