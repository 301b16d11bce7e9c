//! First-order logic syntax trees and their compilation to solver programs.
//!
//! - [`ast`]: terms, formulas, negation and desugaring of conditional connectives
//! - [`validate`]: well-formedness reports and symbol analysis
//! - [`encode`]: canonical JSON document form
//! - [`codegen`]: two-pass compilation to SMT-LIB v2 or Unicode FOL text
//! - [`solver`]: SMT-LIB solver subprocess client and entailment queries
//! - [`oracle`]: bounded finite-model search used to cross-check the solver

pub mod ast;
pub mod codegen;
pub mod encode;
pub mod error;
pub mod generate;
pub mod ident;
pub mod oracle;
pub mod samples;
pub mod solver;
pub mod validate;

pub use ast::{desugar, negate, Atom, Connective, ExtendedConnective, ExtendedOp, Formula, Quantifier, Term, TermKind};
pub use codegen::{
    collect_declarations, compile_program, generate_expression, render_fol, DeclarationSet, Mode, Target, TargetProgram,
};
pub use encode::{decode, encode};
pub use error::{AnalysisError, AstError, CodegenError, OracleError, SolverError};
pub use oracle::{brute_force_entails, BoundedModel, BruteForceVerdict, OracleConfig};
pub use solver::{entails, Entailment, ProcessSolver, SatSolver, SatStatus, SolverVerdict};
pub use validate::{analyze, validate, validate_all, Analysis, Fault, FaultCode, WellFormednessReport};
