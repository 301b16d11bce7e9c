use std::time::Duration;

use folast_core::ast::{negate, Formula, Term};
use folast_core::codegen::{compile_program, Mode, Target};
use folast_core::generate::{FormulaGenerator, SignatureSpec};
use folast_core::oracle::{brute_force_entails, OracleConfig};
use folast_core::samples;
use folast_core::solver::{entails, premises_status, Entailment, ProcessSolver, SatSolver, SatStatus};
use folast_core::OracleError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TIMEOUT: Duration = Duration::from_secs(10);

fn solver() -> Option<ProcessSolver> {
    let solver = ProcessSolver::default();
    match solver.run_text("(check-sat)\n", TIMEOUT) {
        Ok(_) => Some(solver),
        Err(e) => {
            eprintln!("skipping: no SMT-LIB solver ({e})");
            None
        }
    }
}

fn p(c: &str) -> Formula {
    Formula::atom("P", vec![Term::constant(c)])
}

#[test]
fn socrates_program_is_unsat() {
    let Some(s) = solver() else { return };
    let program = compile_program(
        &samples::socrates_premises(),
        Some(&samples::mortal_socrates()),
        Mode::CheckEntails,
        Target::SmtLib2,
    )
    .unwrap();
    assert_eq!(s.check_sat(&program, TIMEOUT).unwrap().status, SatStatus::Unsat);
}

#[test]
fn single_fact_is_sat() {
    let Some(s) = solver() else { return };
    let program = compile_program(&[samples::human_socrates()], None, Mode::Translate, Target::SmtLib2).unwrap();
    assert_eq!(s.check_sat(&program, TIMEOUT).unwrap().status, SatStatus::Sat);
}

#[test]
fn empty_theory_entails_nothing_contingent() {
    let Some(s) = solver() else { return };
    let program = compile_program(&[], Some(&samples::mortal_socrates()), Mode::CheckEntails, Target::SmtLib2).unwrap();
    assert_eq!(s.check_sat(&program, TIMEOUT).unwrap().status, SatStatus::Sat);
}

#[test]
fn one_millisecond_timeout_is_unknown() {
    let Some(s) = solver() else { return };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = FormulaGenerator::random(&mut rng, &SignatureSpec::default());
    let premises: Vec<Formula> = (0..200).map(|_| g.formula(&mut rng)).collect();
    let program = compile_program(&premises, None, Mode::Translate, Target::SmtLib2).unwrap();
    let v = s.check_sat(&program, Duration::from_millis(1)).unwrap();
    assert_eq!(v.status, SatStatus::Unknown);
}

#[test]
fn entailment_examples() {
    let Some(s) = solver() else { return };
    assert_eq!(
        entails(&s, &samples::socrates_premises(), &samples::mortal_socrates(), TIMEOUT).unwrap(),
        Entailment::Holds
    );
    let student = Formula::atom("Student", vec![Term::constant("Rina")]);
    let aware = Formula::atom("Aware", vec![Term::constant("Rina")]);
    assert_eq!(entails(&s, &[student], &aware, TIMEOUT).unwrap(), Entailment::Fails);

    let contradictory = [p("A"), Formula::not(p("A"))];
    assert_eq!(entails(&s, &contradictory, &aware, TIMEOUT).unwrap(), Entailment::Holds);
    assert_eq!(entails(&s, &contradictory, &negate(&aware), TIMEOUT).unwrap(), Entailment::Holds);
    assert_eq!(premises_status(&s, &contradictory, TIMEOUT).unwrap(), SatStatus::Unsat);
}

#[test]
fn oracle_examples() {
    let cfg = OracleConfig { max_domain_size: 2, ..OracleConfig::default() };
    let v = brute_force_entails(&samples::socrates_premises(), &samples::mortal_socrates(), cfg).unwrap();
    assert!(v.entailed);

    let student = Formula::atom("Student", vec![Term::constant("Rina")]);
    let aware = Formula::atom("Aware", vec![Term::constant("Rina")]);
    let cfg1 = OracleConfig { max_domain_size: 1, ..OracleConfig::default() };
    let v = brute_force_entails(std::slice::from_ref(&student), &aware, cfg1).unwrap();
    assert!(!v.entailed);
    let model = v.countermodel.unwrap();
    assert_eq!(model.domain_size, 1);
    assert!(model.evaluate(&student).unwrap());
    assert!(!model.evaluate(&aware).unwrap());

    let some = Formula::exists("x", Formula::atom("P", vec![Term::var("x")]));
    let all = Formula::forall("x", Formula::atom("P", vec![Term::var("x")]));
    let v = brute_force_entails(std::slice::from_ref(&some), &all, cfg).unwrap();
    let model = v.countermodel.expect("countermodel");
    assert_eq!(model.domain_size, 2);
    assert!(model.evaluate(&some).unwrap() && !model.evaluate(&all).unwrap());
}

#[test]
fn oracle_budget_is_enforced() {
    let cfg = OracleConfig { max_domain_size: 3, cap: 5 };
    let many: Vec<Formula> = ["A", "B", "C"].iter().map(|c| Formula::or(p(c), Formula::not(p(c)))).collect();
    // a valid hypothesis forces the search to exhaust every domain size
    let q = Formula::atom("Q", vec![Term::constant("A")]);
    let valid = Formula::or(q.clone(), Formula::not(q));
    let err = brute_force_entails(&many, &valid, cfg).unwrap_err();
    assert!(matches!(err, OracleError::BudgetExceeded { .. }), "{err}");
}

/// Directional agreement on a small random sample; the full run lives in the
/// acceptance suite.
#[test]
fn solver_and_oracle_agree_on_random_instances() {
    let Some(s) = solver() else { return };
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let spec = SignatureSpec { max_constants: 3, max_relations: 4, max_arity: 2, max_depth: 5, max_premises: 3 };
    for _ in 0..60 {
        let g = FormulaGenerator::random(&mut rng, &spec);
        let (premises, h) = g.instance(&mut rng);
        let oracle = match brute_force_entails(&premises, &h, OracleConfig::default()) {
            Ok(v) => v,
            Err(OracleError::BudgetExceeded { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let solved = entails(&s, &premises, &h, TIMEOUT).unwrap();
        if !oracle.entailed {
            assert_ne!(solved, Entailment::Holds, "{premises:?} / {h:?}");
        }
        if solved == Entailment::Holds {
            assert!(oracle.entailed);
        }
    }
}
