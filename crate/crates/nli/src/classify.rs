use std::time::Duration;

use folast_core::solver::{entails, entails_negation, premises_status};
use folast_core::{validate_all, Entailment, Formula, SatSolver, SatStatus, SolverError, WellFormednessReport};
use folast_parser::ParseTrace;
use serde::Serialize;
use thiserror::Error;

use crate::label::{label_from, NliLabel};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("premises and hypothesis do not validate together ({} fault(s))", .0.faults.len())]
    Validation(Box<WellFormednessReport>),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl ClassifyError {
    /// True for failures of the solver process itself, as opposed to
    /// problems with the formulas.
    pub fn is_infrastructure(&self) -> bool {
        match self {
            ClassifyError::Validation(_) => false,
            ClassifyError::Solver(SolverError::Codegen(_)) => false,
            ClassifyError::Solver(_) => true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NliPrediction {
    pub label: NliLabel,
    /// The premises have no model, so they entail every hypothesis.
    pub premises_unsat: bool,
    pub solver_unknown: bool,
    pub entails: Entailment,
    pub entails_negation: Entailment,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<ParseTrace>,
}

/// Runs `p ⊨ h`, `p ⊨ ¬h` and a satisfiability probe of `p` alone.
pub fn classify(
    solver: &dyn SatSolver,
    premises: &[Formula],
    hypothesis: &Formula,
    timeout: Duration,
) -> Result<NliPrediction, ClassifyError> {
    let mut all = premises.to_vec();
    all.push(hypothesis.clone());
    let report = validate_all(&all, None);
    if !report.ok {
        return Err(ClassifyError::Validation(Box::new(report)));
    }

    let e_plus = entails(solver, premises, hypothesis, timeout)?;
    let e_minus = entails_negation(solver, premises, hypothesis, timeout)?;
    let probe = premises_status(solver, premises, timeout)?;
    let (label, solver_unknown) = label_from(e_plus, e_minus);
    let premises_unsat = probe == SatStatus::Unsat;
    if premises_unsat {
        log::warn!("premises are unsatisfiable; every hypothesis follows from them");
    }
    Ok(NliPrediction {
        label,
        premises_unsat,
        solver_unknown,
        entails: e_plus,
        entails_negation: e_minus,
        traces: Vec::new(),
    })
}
