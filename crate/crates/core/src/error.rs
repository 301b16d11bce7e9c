use thiserror::Error;

use crate::validate::WellFormednessReport;

/// Failures while building or decoding syntax trees.
///
/// The two node variants follow the usual split for structured model
/// output: a *missing* node is a document that cannot be read at all
/// (truncated, unparseable, wrong shape), an *invalid* node is one that
/// has the right shape but an unusable value such as an empty name.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AstError {
    #[error("missing node: {0}")]
    MissingNode(String),
    #[error("invalid node: {0}")]
    InvalidNode(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("formula is not well formed ({} fault(s))", .0.faults.len())]
    ContractViolation(Box<WellFormednessReport>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodegenError {
    #[error("relation {relation} used with arity {expected} and {found}")]
    ArityMismatch { relation: String, expected: usize, found: usize },
    #[error("symbol {0} is not declared")]
    UndeclaredSymbol(String),
    #[error("{0} target cannot be sent to a solver")]
    WrongTarget(&'static str),
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver command {0:?} not found")]
    SolverNotFound(String),
    #[error("solver exited with {status} and no answer: {stderr}")]
    SolverCrashed { status: String, stderr: String },
    #[error("empty solver command")]
    EmptyCommand,
    #[error(transparent)]
    Codegen(#[from] CodegenError),
    #[error("solver i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration budget of {cap} interpretations exceeded at domain size {domain_size}")]
    BudgetExceeded { cap: u64, domain_size: usize },
    #[error("variable {0} is unbound")]
    UnboundVariable(String),
    #[error("constant {0} has no interpretation")]
    UnknownConstant(String),
    #[error("relation {0} has no interpretation")]
    UnknownRelation(String),
    #[error(transparent)]
    Codegen(#[from] CodegenError),
}
