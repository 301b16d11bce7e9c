//! Three-way entailment classification over parsed premises and a
//! hypothesis, and a benchmark harness reporting syntax-correctness rate,
//! accuracy and the syntax error breakdown.

pub mod bench;
pub mod classify;
pub mod dataset;
pub mod label;
pub mod report;

pub use bench::{evaluate_benchmark, BenchConfig, BenchError};
pub use classify::{classify, ClassifyError, NliPrediction};
pub use dataset::{load_dataset, parse_dataset, DatasetError, NliInstance};
pub use label::{label_from, NliLabel};
pub use report::{BenchmarkReport, ErrorCounts, InstanceRecord, SentenceRecord, SentenceRole};
