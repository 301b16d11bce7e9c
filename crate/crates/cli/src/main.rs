//! `folast`: translate sentences to first-order logic, classify premise and
//! hypothesis pairs, run benchmarks and validate syntax tree documents.
//!
//! Exit status: 0 on success, 1 on input or validation errors, 2 on
//! infrastructure errors (backend transport, solver process).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "folast", version, about = "Natural language to first-order logic, checked by an SMT solver")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Scripted,
    Http,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetKind {
    Smtlib2,
    Fol,
}

/// Shared settings. Every flag has an environment equivalent; the flag wins.
#[derive(Debug, Args)]
struct Config {
    /// Completion backend.
    #[arg(long, env = "FOLAST_BACKEND", value_enum, default_value = "scripted", global = true)]
    backend: BackendKind,
    /// Chat-completion URL (http backend).
    #[arg(long, env = "FOLAST_ENDPOINT", global = true)]
    endpoint: Option<String>,
    /// Model name sent to the endpoint (http backend).
    #[arg(long, env = "FOLAST_MODEL", global = true)]
    model: Option<String>,
    /// Bearer token for the endpoint.
    #[arg(long, env = "FOLAST_API_KEY", hide_env_values = true, global = true)]
    api_key: Option<String>,
    /// Recorded exchanges, JSON array or JSON lines (scripted backend).
    #[arg(long, env = "FOLAST_SCRIPT", global = true)]
    script: Option<PathBuf>,
    /// SMT-LIB v2 solver reading a program on standard input.
    #[arg(long, env = "FOLAST_SOLVER_CMD", default_value = folast_core::solver::DEFAULT_SOLVER_COMMAND, global = true)]
    solver_cmd: String,
    /// Per solver query and per backend request.
    #[arg(long, env = "FOLAST_TIMEOUT_MS", default_value_t = 10_000, global = true)]
    timeout_ms: u64,
    #[arg(long, env = "FOLAST_MAX_DEPTH", default_value_t = 12, global = true)]
    max_depth: usize,
    /// Largest domain for the bounded model search.
    #[arg(long, env = "FOLAST_DOMAIN_SIZE", default_value_t = 3, global = true)]
    domain_size: usize,
    /// Output language for `translate`.
    #[arg(long, env = "FOLAST_TARGET", value_enum, default_value = "fol", global = true)]
    target: TargetKind,
    /// Output file (translate, classify) or directory (bench).
    #[arg(long, env = "FOLAST_OUT", global = true)]
    out: Option<PathBuf>,
    /// Benchmark instances evaluated at once.
    #[arg(long, env = "FOLAST_CONCURRENCY", default_value_t = 4, global = true)]
    concurrency: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse sentences into syntax trees and print them with their target text.
    Translate {
        sentences: Vec<String>,
        /// Read a document and split it into sentences.
        #[arg(long)]
        file: Option<PathBuf>,
        /// External segmenter command (document on stdin, one sentence per line).
        #[arg(long, env = "FOLAST_SEGMENTER_CMD")]
        segmenter_cmd: Option<String>,
    },
    /// Label a hypothesis against premises: entailment, contradiction or uncertain.
    Classify {
        /// One premise per line.
        #[arg(long)]
        premises: PathBuf,
        #[arg(long)]
        hypothesis: String,
        /// Also search for a countermodel up to --domain-size.
        #[arg(long)]
        cross_check: bool,
    },
    /// Evaluate a line-delimited dataset and write report files.
    Bench { dataset: PathBuf },
    /// Check a syntax tree document (`-` for standard input).
    Validate { document: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.kind as u8)
        }
    }
}
