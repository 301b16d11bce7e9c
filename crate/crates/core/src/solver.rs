//! SMT-LIB v2 solver client.
//!
//! Each query runs in a fresh solver process: the program goes to standard
//! input, the answer token is read from standard output, and the process
//! is killed and reaped when the timeout expires.

use std::io::{ErrorKind, Read, Write};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use wait_timeout::ChildExt;

use crate::ast::{negate, Formula};
use crate::codegen::{compile_program, Mode, Target, TargetProgram};
use crate::error::{CodegenError, SolverError};

pub const DEFAULT_SOLVER_COMMAND: &str = "z3 -in -smt2";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverVerdict {
    pub status: SatStatus,
    pub elapsed_ms: u64,
    pub raw: String,
}

impl SolverVerdict {
    /// `(error ...)` lines reported by the solver front end.
    pub fn error_lines(&self) -> Vec<&str> {
        self.raw.lines().map(str::trim).filter(|l| l.starts_with("(error")).collect()
    }
}

/// Three-valued outcome of an entailment query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Entailment {
    Holds,
    Fails,
    Unknown,
}

/// Anything that can decide satisfiability of an SMT-LIB program.
pub trait SatSolver: Send + Sync {
    fn check_sat(&self, program: &TargetProgram, timeout: Duration) -> Result<SolverVerdict, SolverError>;
}

const PIPE_GRACE: Duration = Duration::from_millis(500);

fn drain(mut pipe: impl Read + Send + 'static) -> mpsc::Receiver<String> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut buf = String::new();
        let _ = pipe.read_to_string(&mut buf);
        let _ = tx.send(buf);
    });
    rx
}

/// Extracts the status from the first line that is exactly an answer token.
pub fn parse_answer(stdout: &str) -> Option<SatStatus> {
    stdout.lines().map(str::trim).find_map(|line| match line {
        "sat" => Some(SatStatus::Sat),
        "unsat" => Some(SatStatus::Unsat),
        "unknown" => Some(SatStatus::Unknown),
        _ => None,
    })
}

/// External solver invoked as a subprocess.
#[derive(Debug, Clone)]
pub struct ProcessSolver {
    program: String,
    args: Vec<String>,
}

impl ProcessSolver {
    /// Parses a whitespace-separated command line such as `z3 -in -smt2`.
    pub fn from_command_line(command: &str) -> Result<Self, SolverError> {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts.next().ok_or(SolverError::EmptyCommand)?;
        Ok(ProcessSolver { program, args: parts.collect() })
    }

    pub fn command_line(&self) -> String {
        std::iter::once(self.program.as_str()).chain(self.args.iter().map(String::as_str)).collect::<Vec<_>>().join(" ")
    }

    /// Runs raw SMT-LIB text.
    pub fn run_text(&self, text: &str, timeout: Duration) -> Result<SolverVerdict, SolverError> {
        let start = Instant::now();
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| match e.kind() {
                ErrorKind::NotFound | ErrorKind::PermissionDenied => SolverError::SolverNotFound(self.command_line()),
                _ => SolverError::Io(e),
            })?;

        let mut stdin = child.stdin.take().expect("piped stdin");
        let input = text.to_string();
        // a solver that exits early closes the pipe; the write error is irrelevant then
        let writer = thread::spawn(move || {
            let _ = stdin.write_all(input.as_bytes());
        });
        let stdout = drain(child.stdout.take().expect("piped stdout"));
        let stderr = drain(child.stderr.take().expect("piped stderr"));

        let exit = child.wait_timeout(timeout)?;
        let timed_out = exit.is_none();
        let exit = match exit {
            Some(status) => status,
            None => {
                log::debug!("solver timed out after {timeout:?}, killing");
                let _ = child.kill();
                child.wait()?
            }
        };
        // grandchildren may keep the pipes open after a kill; never block on them
        let raw = stdout.recv_timeout(PIPE_GRACE).unwrap_or_default();
        let stderr = stderr.recv_timeout(PIPE_GRACE).unwrap_or_default();
        if writer.is_finished() {
            let _ = writer.join();
        }
        let elapsed_ms = start.elapsed().as_millis() as u64;

        if timed_out {
            return Ok(SolverVerdict { status: SatStatus::Unknown, elapsed_ms, raw });
        }
        match parse_answer(&raw) {
            Some(status) => Ok(SolverVerdict { status, elapsed_ms, raw }),
            None if !exit.success() => Err(SolverError::SolverCrashed {
                status: exit.to_string(),
                stderr: if stderr.trim().is_empty() { raw } else { stderr },
            }),
            None => Ok(SolverVerdict { status: SatStatus::Unknown, elapsed_ms, raw }),
        }
    }
}

impl Default for ProcessSolver {
    fn default() -> Self {
        ProcessSolver::from_command_line(DEFAULT_SOLVER_COMMAND).expect("non-empty default")
    }
}

impl SatSolver for ProcessSolver {
    fn check_sat(&self, program: &TargetProgram, timeout: Duration) -> Result<SolverVerdict, SolverError> {
        if program.target != Target::SmtLib2 {
            return Err(CodegenError::WrongTarget(program.target.as_str()).into());
        }
        let mut text = program.to_string();
        if program.query.is_none() {
            text.push_str("(check-sat)\n");
        }
        self.run_text(&text, timeout)
    }
}

/// Decides `premises ⊨ hypothesis` by refuting `premises ∧ ¬hypothesis`.
pub fn entails(
    solver: &dyn SatSolver,
    premises: &[Formula],
    hypothesis: &Formula,
    timeout: Duration,
) -> Result<Entailment, SolverError> {
    let program = compile_program(premises, Some(hypothesis), Mode::CheckEntails, Target::SmtLib2)?;
    Ok(match solver.check_sat(&program, timeout)?.status {
        SatStatus::Unsat => Entailment::Holds,
        SatStatus::Sat => Entailment::Fails,
        SatStatus::Unknown => Entailment::Unknown,
    })
}

/// Entailment of the negated hypothesis, `premises ⊨ ¬hypothesis`.
pub fn entails_negation(
    solver: &dyn SatSolver,
    premises: &[Formula],
    hypothesis: &Formula,
    timeout: Duration,
) -> Result<Entailment, SolverError> {
    entails(solver, premises, &negate(hypothesis), timeout)
}

/// Satisfiability of the premises on their own.
pub fn premises_status(
    solver: &dyn SatSolver,
    premises: &[Formula],
    timeout: Duration,
) -> Result<SatStatus, SolverError> {
    let program = compile_program(premises, None, Mode::CheckEntails, Target::SmtLib2)?;
    Ok(solver.check_sat(&program, timeout)?.status)
}
