use std::io::Read;
use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, Context};
use folast_core::codegen::{compile_program, render_fol, Mode, Target};
use folast_core::encode::{decode_str, to_value};
use folast_core::{brute_force_entails, validate, Formula, OracleConfig, OracleError, ProcessSolver};
use folast_nli::{classify, evaluate_benchmark, load_dataset, BenchConfig, BenchError, ClassifyError, DatasetError};
use folast_parser::preprocess::{segment, External, SegmenterConfig, SegmenterMode};
use folast_parser::{
    CompletionBackend, HttpBackend, HttpConfig, ParseError, ParseTrace, ParserConfig, ScriptedBackend, SemanticParser,
};
use serde_json::json;

use crate::{BackendKind, Cli, Command, Config, TargetKind};

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Input = 1,
    Infrastructure = 2,
}

pub struct Failure {
    pub kind: Kind,
    pub error: anyhow::Error,
}

type Outcome<T = ()> = Result<T, Failure>;

trait Classified<T> {
    fn input(self) -> Outcome<T>;
    fn infra(self) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classified<T> for Result<T, E> {
    fn input(self) -> Outcome<T> {
        self.map_err(|e| Failure { kind: Kind::Input, error: e.into() })
    }
    fn infra(self) -> Outcome<T> {
        self.map_err(|e| Failure { kind: Kind::Infrastructure, error: e.into() })
    }
}

pub fn run(cli: Cli) -> Outcome {
    let cfg = cli.config;
    if cfg.timeout_ms == 0 {
        return Err(anyhow!("--timeout-ms must be positive")).input();
    }
    if cfg.max_depth == 0 {
        return Err(anyhow!("--max-depth must be positive")).input();
    }
    match cli.command {
        Command::Translate { sentences, file, segmenter_cmd } => {
            translate(&cfg, sentences, file.as_deref(), segmenter_cmd)
        }
        Command::Classify { premises, hypothesis, cross_check } => {
            classify_cmd(&cfg, &premises, &hypothesis, cross_check)
        }
        Command::Bench { dataset } => bench(&cfg, &dataset),
        Command::Validate { document } => validate_cmd(&document),
    }
}

fn timeout(cfg: &Config) -> Duration {
    Duration::from_millis(cfg.timeout_ms)
}

fn backend(cfg: &Config) -> Outcome<Arc<dyn CompletionBackend>> {
    match cfg.backend {
        BackendKind::Scripted => {
            let path = cfg
                .script
                .as_ref()
                .ok_or_else(|| anyhow!("the scripted backend needs --script (or FOLAST_SCRIPT)"))
                .input()?;
            let b = ScriptedBackend::from_path(path)
                .with_context(|| format!("loading script {}", path.display()))
                .input()?;
            Ok(Arc::new(b))
        }
        BackendKind::Http => {
            let (Some(endpoint), Some(model)) = (&cfg.endpoint, &cfg.model) else {
                return Err(anyhow!(
                    "the http backend needs --endpoint and --model (or FOLAST_ENDPOINT / FOLAST_MODEL)"
                ))
                .input();
            };
            let mut http = HttpConfig::new(endpoint, model);
            http.api_key = cfg.api_key.clone();
            http.timeout = timeout(cfg);
            http.concurrency = cfg.concurrency.max(1);
            Ok(Arc::new(HttpBackend::new(http).input()?))
        }
    }
}

fn parser(cfg: &Config) -> Outcome<SemanticParser> {
    let config = ParserConfig { max_depth: cfg.max_depth, ..ParserConfig::default() };
    Ok(SemanticParser::new(backend(cfg)?, config))
}

fn solver(cfg: &Config) -> Outcome<ProcessSolver> {
    ProcessSolver::from_command_line(&cfg.solver_cmd).input()
}

fn write_out(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).input()?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display())).input()
}

/// Parses one sentence; syntax failures are input errors, backend
/// failures are infrastructure errors.
fn parse_one(parser: &SemanticParser, sentence: &str) -> (Outcome<Formula>, ParseTrace) {
    let out = parser.parse_sentence(sentence);
    let result = match out.result {
        Ok(f) => Ok(f),
        Err(ParseError::Infrastructure(e)) => Err(anyhow!("{sentence:?}: {e}")).infra(),
        Err(e) => Err(anyhow!("{sentence:?}: {e}")).input(),
    };
    (result, out.trace)
}

fn translate(cfg: &Config, mut sentences: Vec<String>, file: Option<&Path>, segmenter_cmd: Option<String>) -> Outcome {
    if let Some(path) = file {
        let doc = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).input()?;
        let mut seg = SegmenterConfig::default();
        if let Some(cmd) = segmenter_cmd {
            seg.mode = SegmenterMode::External(External::Command(cmd));
        }
        sentences.extend(segment(&doc, &seg).infra()?);
    }
    if sentences.is_empty() {
        return Err(anyhow!("nothing to translate: pass sentences or --file")).input();
    }
    let parser = parser(cfg)?;
    let mut results = Vec::new();
    let mut first_failure = None;
    for sentence in &sentences {
        let (result, trace) = parse_one(&parser, sentence);
        match result {
            Ok(f) => {
                let target = match cfg.target {
                    TargetKind::Fol => render_fol(&f),
                    TargetKind::Smtlib2 => {
                        compile_program(std::slice::from_ref(&f), None, Mode::Translate, Target::SmtLib2)
                            .map(|p| p.to_string())
                    }
                }
                .input()?;
                let ast = to_value(&f);
                println!("{}", serde_json::to_string(&ast).expect("ast serializes"));
                println!("{}", target.trim_end());
                results.push(json!({"sentence": sentence, "ast": ast, "target": target, "trace": trace}));
            }
            Err(failure) => {
                results.push(json!({"sentence": sentence, "error": failure.error.to_string(), "trace": trace}));
                if matches!(failure.kind, Kind::Infrastructure) {
                    first_failure = Some(failure);
                    break;
                }
                eprintln!("error: {:#}", failure.error);
                first_failure.get_or_insert(failure);
            }
        }
    }
    if let Some(out) = &cfg.out {
        write_out(out, &(serde_json::to_string_pretty(&results).expect("results serialize") + "\n"))?;
    }
    match first_failure {
        None => Ok(()),
        Some(f @ Failure { kind: Kind::Infrastructure, .. }) => Err(f),
        Some(f) => {
            let failed = results.iter().filter(|r| r.get("error").is_some()).count();
            Err(Failure { kind: f.kind, error: anyhow!("{failed} of {} sentence(s) failed to parse", sentences.len()) })
        }
    }
}

fn classify_cmd(cfg: &Config, premises_path: &Path, hypothesis: &str, cross_check: bool) -> Outcome {
    let text = std::fs::read_to_string(premises_path)
        .with_context(|| format!("reading {}", premises_path.display()))
        .input()?;
    let premise_texts: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if premise_texts.is_empty() {
        return Err(anyhow!("{} has no premises", premises_path.display())).input();
    }
    if cross_check && cfg.domain_size == 0 {
        return Err(anyhow!("--domain-size must be positive")).input();
    }
    let parser = parser(cfg)?;
    let solver = solver(cfg)?;

    let mut formulas = Vec::new();
    let mut traces = Vec::new();
    for s in premise_texts.iter().copied().chain([hypothesis]) {
        let (result, trace) = parse_one(&parser, s);
        traces.push(trace);
        formulas.push(result?);
    }
    let h = formulas.pop().expect("hypothesis");
    let mut prediction = match classify(&solver, &formulas, &h, timeout(cfg)) {
        Ok(p) => p,
        Err(ClassifyError::Validation(r)) => {
            let faults = serde_json::to_string(&r.faults).expect("faults serialize");
            return Err(anyhow!("premises and hypothesis do not validate together: {faults}")).input();
        }
        Err(e) if e.is_infrastructure() => return Err(e).infra(),
        Err(e) => return Err(e).input(),
    };
    println!("{}", prediction.label);
    println!("premises_unsat={} solver_unknown={}", prediction.premises_unsat, prediction.solver_unknown);
    if prediction.premises_unsat {
        eprintln!("warning: the premises are unsatisfiable, so they entail every hypothesis");
    }
    let mut oracle = serde_json::Value::Null;
    if cross_check {
        let ocfg = OracleConfig { max_domain_size: cfg.domain_size, ..OracleConfig::default() };
        oracle = match brute_force_entails(&formulas, &h, ocfg) {
            Ok(v) => {
                match &v.countermodel {
                    Some(m) => println!("oracle: countermodel of size {}", m.domain_size),
                    None => println!("oracle: no countermodel up to size {}", cfg.domain_size),
                }
                serde_json::to_value(&v).expect("verdict serializes")
            }
            Err(e @ OracleError::BudgetExceeded { .. }) => {
                println!("oracle: {e}");
                json!({"error": e.to_string()})
            }
            Err(e) => return Err(e).input(),
        };
    }
    if let Some(out) = &cfg.out {
        prediction.traces = traces;
        let doc = json!({"prediction": prediction, "oracle": oracle});
        write_out(out, &(serde_json::to_string_pretty(&doc).expect("prediction serializes") + "\n"))?;
    }
    Ok(())
}

fn bench(cfg: &Config, dataset: &Path) -> Outcome {
    let data = load_dataset(dataset).map_err(|e| match e {
        DatasetError::Record { .. } => anyhow!("{}: {e}", dataset.display()),
        e => anyhow!(e),
    });
    let data = data.input()?;
    let parser = parser(cfg)?;
    let solver = solver(cfg)?;
    let bcfg = BenchConfig { timeout: timeout(cfg), concurrency: cfg.concurrency, out_dir: cfg.out.clone() };
    match evaluate_benchmark(&data, &parser, &solver, &bcfg) {
        Ok(report) => {
            print!("{}", report.table());
            if let Some(dir) = &cfg.out {
                let path =
                    report.write(dir, "report").with_context(|| format!("writing into {}", dir.display())).input()?;
                println!("report written to {}", path.display());
            }
            Ok(())
        }
        Err(e @ BenchError::Infrastructure { .. }) => {
            if let BenchError::Infrastructure { partial, .. } = &e {
                print!("{}", partial.table());
            }
            Err(e).infra()
        }
        Err(e) => Err(e).input(),
    }
}

fn validate_cmd(path: &Path) -> Outcome {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input").input()?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).input()?
    };
    let f = decode_str(&text).context("decoding syntax tree document").input()?;
    let report = validate(&f, None);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.ok {
        Ok(())
    } else {
        Err(anyhow!("{} fault(s)", report.faults.len())).input()
    }
}
