use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Duration;

use folast_core::solver::DEFAULT_TIMEOUT;
use folast_core::{encode, validate, SatSolver};
use folast_parser::{ParseError, ParseTrace, SemanticParser};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::classify::{classify, ClassifyError};
use crate::dataset::NliInstance;
use crate::label::NliLabel;
use crate::report::{BenchmarkReport, InstanceRecord, SentenceRecord, SentenceRole};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Per solver query.
    pub timeout: Duration,
    /// Instances evaluated at once.
    pub concurrency: usize,
    /// Receives `traces/instance-NNNNN.json` files and, on abort,
    /// `report.partial.{json,txt}`.
    pub out_dir: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { timeout: DEFAULT_TIMEOUT, concurrency: 4, out_dir: None }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("invalid benchmark configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("instance {index}: {message}; {} instance(s) completed before the abort", partial.instances)]
    Infrastructure { index: usize, message: String, partial: Box<BenchmarkReport> },
}

struct Abort {
    index: usize,
    message: String,
}

fn write_file(path: PathBuf, contents: String) -> Result<(), BenchError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| BenchError::Io { path: dir.display().to_string(), source })?;
    }
    std::fs::write(&path, contents).map_err(|source| BenchError::Io { path: path.display().to_string(), source })
}

fn run_instance(
    index: usize,
    inst: &NliInstance,
    parser: &SemanticParser,
    solver: &dyn SatSolver,
    cfg: &BenchConfig,
) -> Result<(InstanceRecord, Vec<ParseTrace>), Abort> {
    let roles = inst
        .premises
        .iter()
        .map(|p| (SentenceRole::Premise, p))
        .chain(std::iter::once((SentenceRole::Hypothesis, &inst.hypothesis)));

    let mut sentences = Vec::new();
    let mut traces = Vec::new();
    let mut formulas = Vec::new();
    for (role, text) in roles {
        let out = parser.parse_sentence(text);
        traces.push(out.trace);
        let result = out.result.and_then(|f| {
            let report = validate(&f, None);
            if report.ok {
                Ok(f)
            } else {
                Err(ParseError::InvalidNode(format!("ill-formed result: {} fault(s)", report.faults.len())))
            }
        });
        let record = match result {
            Ok(f) => {
                let rec = SentenceRecord {
                    role,
                    text: text.clone(),
                    ok: true,
                    error: None,
                    message: None,
                    formula: Some(encode::to_value(&f)),
                };
                formulas.push(f);
                rec
            }
            Err(ParseError::Infrastructure(e)) => return Err(Abort { index, message: e.to_string() }),
            Err(e) => SentenceRecord {
                role,
                text: text.clone(),
                ok: false,
                error: e.code(),
                message: Some(e.to_string()),
                formula: None,
            },
        };
        sentences.push(record);
    }

    let parsed = sentences.iter().all(|s| s.ok);
    let mut record = InstanceRecord {
        index,
        gold: inst.gold,
        predicted: NliLabel::Uncertain,
        correct: false,
        parsed,
        premises_unsat: false,
        solver_unknown: false,
        compile_error: None,
        sentences,
    };
    if parsed {
        let hypothesis = formulas.pop().expect("hypothesis formula");
        match classify(solver, &formulas, &hypothesis, cfg.timeout) {
            Ok(pred) => {
                record.predicted = pred.label;
                record.premises_unsat = pred.premises_unsat;
                record.solver_unknown = pred.solver_unknown;
            }
            Err(e) if e.is_infrastructure() => return Err(Abort { index, message: e.to_string() }),
            Err(ClassifyError::Validation(report)) => {
                let detail: Vec<String> =
                    report.faults.iter().map(|f| format!("{:?} at {}: {}", f.code, f.path, f.detail)).collect();
                record.compile_error = Some(detail.join("; "));
            }
            Err(e) => record.compile_error = Some(e.to_string()),
        }
    }
    record.correct = record.predicted == record.gold;
    Ok((record, traces))
}

/// Parses every premise and hypothesis, classifies fully parsed instances
/// and aggregates the metrics. Instances with a failed sentence predict
/// `Uncertain` without a solver run.
pub fn evaluate_benchmark(
    dataset: &[NliInstance],
    parser: &SemanticParser,
    solver: &dyn SatSolver,
    cfg: &BenchConfig,
) -> Result<BenchmarkReport, BenchError> {
    if dataset.is_empty() {
        return Err(BenchError::EmptyDataset);
    }
    if cfg.concurrency == 0 {
        return Err(BenchError::Config("concurrency must be at least 1".into()));
    }
    if cfg.timeout.is_zero() {
        return Err(BenchError::Config("timeout must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.concurrency)
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;

    let aborted = AtomicBool::new(false);
    let results: Vec<Option<Result<InstanceRecord, Abort>>> = pool.install(|| {
        dataset
            .par_iter()
            .enumerate()
            .map(|(index, inst)| {
                if aborted.load(Ordering::SeqCst) {
                    return None;
                }
                let result = run_instance(index, inst, parser, solver, cfg).and_then(|(record, traces)| {
                    if let Some(dir) = &cfg.out_dir {
                        let doc = json!({ "index": index, "instance": inst, "record": &record, "traces": traces });
                        let path = dir.join("traces").join(format!("instance-{index:05}.json"));
                        write_file(path, serde_json::to_string_pretty(&doc).expect("trace serializes") + "\n")
                            .map_err(|e| Abort { index, message: e.to_string() })?;
                    }
                    Ok(record)
                });
                if result.is_err() {
                    aborted.store(true, Ordering::SeqCst);
                }
                Some(result)
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut first_abort: Option<Abort> = None;
    for r in results.into_iter().flatten() {
        match r {
            Ok(rec) => records.push(rec),
            Err(a) => {
                if first_abort.as_ref().is_none_or(|f| a.index < f.index) {
                    first_abort = Some(a);
                }
            }
        }
    }
    match first_abort {
        None => Ok(BenchmarkReport::from_records(records, true)),
        Some(Abort { index, message }) => {
            let partial = BenchmarkReport::from_records(records, false);
            if let Some(dir) = &cfg.out_dir {
                match partial.write(dir, "report.partial") {
                    Ok(path) => log::error!("benchmark aborted; partial report written to {}", path.display()),
                    Err(e) => log::error!("benchmark aborted; cannot write partial report: {e}"),
                }
            }
            Err(BenchError::Infrastructure { index, message, partial: Box::new(partial) })
        }
    }
}
