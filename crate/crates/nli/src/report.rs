use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use folast_parser::ErrorCode;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::label::NliLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentenceRole {
    Premise,
    Hypothesis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub role: SentenceRole,
    pub text: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorCode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Canonical document of the parsed formula.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub gold: NliLabel,
    pub predicted: NliLabel,
    pub correct: bool,
    /// Every sentence parsed and validated, so the solver ran.
    pub parsed: bool,
    pub premises_unsat: bool,
    pub solver_unknown: bool,
    /// Sentences parsed on their own but clash when combined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compile_error: Option<String>,
    pub sentences: Vec<SentenceRecord>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCounts {
    pub missing_nodes: usize,
    pub invalid_nodes: usize,
    pub depth_exceeded: usize,
    pub loop_detected: usize,
}

impl ErrorCounts {
    pub fn add(&mut self, code: ErrorCode) {
        match code {
            ErrorCode::MissingNode => self.missing_nodes += 1,
            ErrorCode::InvalidNode => self.invalid_nodes += 1,
            ErrorCode::DepthExceeded => self.depth_exceeded += 1,
            ErrorCode::LoopDetected => self.loop_detected += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.missing_nodes + self.invalid_nodes + self.depth_exceeded + self.loop_detected
    }
}

/// Ratios are plain `f64` divisions of the integer counts stored beside
/// them, so they can be recomputed exactly. An empty denominator gives 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    /// False for a partial report written after an infrastructure failure.
    pub complete: bool,
    pub instances: usize,
    pub syntax_correct: usize,
    pub total_sentences: usize,
    pub syntax_rate: f64,
    pub matches: usize,
    pub accuracy: f64,
    pub parsed_instances: usize,
    pub parsed_matches: usize,
    pub accuracy_over_parsed: f64,
    pub premises_unsat: usize,
    pub solver_unknown: usize,
    pub compile_errors: usize,
    pub error_counts: ErrorCounts,
    pub records: Vec<InstanceRecord>,
}

pub fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl BenchmarkReport {
    pub fn from_records(mut records: Vec<InstanceRecord>, complete: bool) -> Self {
        records.sort_by_key(|r| r.index);
        let mut counts = ErrorCounts::default();
        let (mut correct, mut total) = (0, 0);
        for s in records.iter().flat_map(|r| &r.sentences) {
            total += 1;
            match (s.ok, s.error) {
                (true, _) => correct += 1,
                (false, Some(code)) => counts.add(code),
                (false, None) => unreachable!("failed sentence without an error code"),
            }
        }
        let matches = records.iter().filter(|r| r.correct).count();
        let parsed_instances = records.iter().filter(|r| r.parsed).count();
        let parsed_matches = records.iter().filter(|r| r.parsed && r.correct).count();
        BenchmarkReport {
            complete,
            instances: records.len(),
            syntax_correct: correct,
            total_sentences: total,
            syntax_rate: ratio(correct, total),
            matches,
            accuracy: ratio(matches, records.len()),
            parsed_instances,
            parsed_matches,
            accuracy_over_parsed: ratio(parsed_matches, parsed_instances),
            premises_unsat: records.iter().filter(|r| r.premises_unsat).count(),
            solver_unknown: records.iter().filter(|r| r.solver_unknown).count(),
            compile_errors: records.iter().filter(|r| r.compile_error.is_some()).count(),
            error_counts: counts,
            records,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary.
    pub fn table(&self) -> String {
        let mut t = String::new();
        let status = if self.complete { "" } else { " (partial)" };
        let _ = writeln!(t, "benchmark report{status}");
        let _ = writeln!(t, "  instances            {:>8}", self.instances);
        let _ = writeln!(t, "  sentences            {:>8}", self.total_sentences);
        let _ = writeln!(t, "  syntax correct       {:>8}", self.syntax_correct);
        let _ = writeln!(t, "  syntax rate          {:>8.4}", self.syntax_rate);
        let _ = writeln!(t, "  accuracy             {:>8.4}  ({}/{})", self.accuracy, self.matches, self.instances);
        let _ = writeln!(
            t,
            "  accuracy (parsed)    {:>8.4}  ({}/{})",
            self.accuracy_over_parsed, self.parsed_matches, self.parsed_instances
        );
        let _ = writeln!(t, "  premises unsat       {:>8}", self.premises_unsat);
        let _ = writeln!(t, "  solver unknown       {:>8}", self.solver_unknown);
        let _ = writeln!(t, "  compile errors       {:>8}", self.compile_errors);
        let _ = writeln!(t, "syntax errors");
        let e = &self.error_counts;
        let _ = writeln!(t, "  missing nodes        {:>8}", e.missing_nodes);
        let _ = writeln!(t, "  invalid nodes        {:>8}", e.invalid_nodes);
        let _ = writeln!(t, "  depth exceeded       {:>8}", e.depth_exceeded);
        let _ = writeln!(t, "  loop detected        {:>8}", e.loop_detected);
        t
    }

    /// Writes `<stem>.json` and `<stem>.txt` into `dir` and returns the JSON path.
    pub fn write(&self, dir: &Path, stem: &str) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{stem}.json"));
        std::fs::write(&json, self.to_json() + "\n")?;
        std::fs::write(dir.join(format!("{stem}.txt")), self.table())?;
        Ok(json)
    }
}
