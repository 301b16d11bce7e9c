//! Recursive top-down semantic parser.
//!
//! A selector call routes each sentence to one of four classes. The
//! quantified and logical steps peel off the outermost construct and
//! recurse on the rewritten sub-sentences; the atomic step makes two calls
//! (predicate kind, then extraction) and builds a leaf. Every exchange is
//! recorded in a [`ParseTrace`].
//!
//! Two guards bound the recursion: a depth limit, and a per-path set of
//! normalized sentences that stops a backend from cycling through the same
//! rewrite (for example stripping and re-adding a negation forever).

mod rename;
mod trace;

use std::sync::Arc;

use folast_core::ast::{desugar_tagged, Formula, Quantifier, Term};
use folast_core::encode::to_value;
use folast_core::ident::{constant_name, fresh_name, is_variable_name, is_variable_token, relation_name};
use folast_core::validate::validate;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use rename::rename_introduced;
pub use trace::{ParseTrace, TraceOutcome, TraceStep};

use crate::backend::{CompletionBackend, PromptRequest, DEFAULT_MAX_TOKENS};
use crate::error::ParseError;
use crate::schema::SchemaId;

pub const DEFAULT_MAX_DEPTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SentenceClass {
    Atomic,
    Quantified,
    LogicalBinary,
    LogicalUnary,
}

impl SentenceClass {
    pub fn from_letter(letter: &str) -> Result<Self, ParseError> {
        match letter.trim() {
            "A" => Ok(SentenceClass::Atomic),
            "B" => Ok(SentenceClass::Quantified),
            "C" => Ok(SentenceClass::LogicalBinary),
            "D" => Ok(SentenceClass::LogicalUnary),
            other => Err(ParseError::InvalidNode(format!("unknown sentence class {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomicSchemaKind {
    Adjective,
    Intransitive,
    Transitive,
    Ditransitive,
}

impl AtomicSchemaKind {
    pub fn from_letter(letter: &str) -> Result<Self, ParseError> {
        match letter.trim() {
            "A" => Ok(AtomicSchemaKind::Adjective),
            "B" => Ok(AtomicSchemaKind::Intransitive),
            "C" => Ok(AtomicSchemaKind::Transitive),
            "D" => Ok(AtomicSchemaKind::Ditransitive),
            other => Err(ParseError::InvalidNode(format!("unknown predicate kind {other:?}"))),
        }
    }

    pub fn schema(self) -> SchemaId {
        match self {
            AtomicSchemaKind::Adjective => SchemaId::AtomicAdjective,
            AtomicSchemaKind::Intransitive => SchemaId::AtomicIntransitive,
            AtomicSchemaKind::Transitive => SchemaId::AtomicTransitive,
            AtomicSchemaKind::Ditransitive => SchemaId::AtomicDitransitive,
        }
    }

    /// Field holding the predicate, then the argument fields in order.
    fn fields(self) -> (&'static str, &'static [&'static str]) {
        match self {
            AtomicSchemaKind::Adjective => ("adjective", &["obj"]),
            AtomicSchemaKind::Intransitive => ("verb", &["subject"]),
            AtomicSchemaKind::Transitive => ("verb", &["subject", "obj"]),
            AtomicSchemaKind::Ditransitive => ("verb", &["subject", "indirect_obj", "direct_obj"]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParserConfig {
    pub max_depth: usize,
    pub max_tokens: u32,
    pub temperature: f64,
}

impl Default for ParserConfig {
    fn default() -> Self {
        ParserConfig { max_depth: DEFAULT_MAX_DEPTH, max_tokens: DEFAULT_MAX_TOKENS, temperature: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct ParseOutput {
    pub result: Result<Formula, ParseError>,
    pub trace: ParseTrace,
}

/// Lowercased, whitespace-collapsed, without trailing terminators.
pub fn normalize_sentence(sentence: &str) -> String {
    let collapsed = sentence.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    collapsed.trim_end_matches(['.', '!', '?', ' ']).to_string()
}

#[derive(Clone)]
pub struct SemanticParser {
    backend: Arc<dyn CompletionBackend>,
    config: ParserConfig,
}

impl SemanticParser {
    pub fn new(backend: Arc<dyn CompletionBackend>, config: ParserConfig) -> Self {
        SemanticParser { backend, config }
    }

    pub fn config(&self) -> &ParserConfig {
        &self.config
    }

    /// Classifies a sentence with a single selector call.
    pub fn select_parser(&self, sentence: &str) -> Result<SentenceClass, ParseError> {
        let mut run = Run::new(self);
        run.select(sentence, 1)
    }

    /// Parses one sentence into a validated formula.
    pub fn parse_sentence(&self, sentence: &str) -> ParseOutput {
        let mut run = Run::new(self);
        let result = if self.config.max_depth == 0 {
            Err(ParseError::DepthExceeded { max_depth: 0 })
        } else {
            run.parse(sentence, 1).and_then(|f| {
                let report = validate(&f, None);
                if report.ok {
                    Ok(f)
                } else {
                    let faults: Vec<String> =
                        report.faults.iter().map(|x| format!("{}: {}", x.path, x.detail)).collect();
                    Err(ParseError::InvalidNode(format!("ill-formed result: {}", faults.join("; "))))
                }
            })
        };
        let outcome = match &result {
            Ok(f) => TraceOutcome::Parsed { formula: to_value(f) },
            Err(e) => ParseTrace::failed(e),
        };
        let trace =
            ParseTrace { sentence: sentence.to_string(), steps: run.steps, outcome, depth_reached: run.depth_reached };
        ParseOutput { result, trace }
    }
}

struct Run<'p> {
    parser: &'p SemanticParser,
    steps: Vec<TraceStep>,
    depth_reached: usize,
    /// Normalized sentences on the current recursion path.
    path: Vec<String>,
    /// Variables bound by enclosing quantifiers, innermost last.
    scope: Vec<String>,
}

impl<'p> Run<'p> {
    fn new(parser: &'p SemanticParser) -> Self {
        Run { parser, steps: Vec::new(), depth_reached: 0, path: Vec::new(), scope: Vec::new() }
    }

    fn call(&mut self, schema: SchemaId, input: &str, depth: usize) -> Result<Map<String, Value>, ParseError> {
        let mut request = PromptRequest::new(schema, input);
        request.max_tokens = self.parser.config.max_tokens;
        request.temperature = self.parser.config.temperature;
        let mut step = TraceStep {
            depth,
            class: None,
            schema_id: schema,
            input: input.to_string(),
            document: None,
            rewrite: Vec::new(),
            error: None,
        };
        let result = self.parser.backend.complete_structured(&request);
        match &result {
            Ok(r) => step.document = Some(r.document.clone()),
            Err(e) => step.error = Some(e.to_string()),
        }
        self.steps.push(step);
        match result?.document {
            Value::Object(fields) => Ok(fields),
            _ => unreachable!("verified documents are objects"),
        }
    }

    fn last_step(&mut self) -> &mut TraceStep {
        self.steps.last_mut().expect("a step was just recorded")
    }

    fn select(&mut self, sentence: &str, depth: usize) -> Result<SentenceClass, ParseError> {
        let fields = self.call(SchemaId::Selector, sentence, depth)?;
        let class = SentenceClass::from_letter(text(&fields, "answer"))?;
        self.last_step().class = Some(class);
        Ok(class)
    }

    fn parse(&mut self, sentence: &str, depth: usize) -> Result<Formula, ParseError> {
        let normalized = normalize_sentence(sentence);
        if normalized.is_empty() {
            return Err(ParseError::InvalidNode("empty sentence".into()));
        }
        if self.path.contains(&normalized) {
            return Err(ParseError::LoopDetected { sentence: sentence.to_string() });
        }
        if depth > self.parser.config.max_depth {
            return Err(ParseError::DepthExceeded { max_depth: self.parser.config.max_depth });
        }
        self.depth_reached = self.depth_reached.max(depth);
        self.path.push(normalized);
        let result = self.dispatch(sentence, depth);
        self.path.pop();
        result
    }

    fn dispatch(&mut self, sentence: &str, depth: usize) -> Result<Formula, ParseError> {
        match self.select(sentence, depth)? {
            SentenceClass::Atomic => self.atomic(sentence, depth),
            SentenceClass::Quantified => self.quantified(sentence, depth),
            SentenceClass::LogicalBinary => self.binary(sentence, depth),
            SentenceClass::LogicalUnary => self.unary(sentence, depth),
        }
    }

    fn quantified(&mut self, sentence: &str, depth: usize) -> Result<Formula, ParseError> {
        let fields = self.call(SchemaId::Quantified, sentence, depth)?;
        let quantifier = match text(&fields, "quantifier") {
            "ForAll" => Quantifier::ForAll,
            "ThereExists" => Quantifier::Exists,
            other => return Err(ParseError::InvalidNode(format!("unknown quantifier {other:?}"))),
        };
        let letter = text(&fields, "variable").trim().to_string();
        if !is_variable_name(&letter) {
            return Err(ParseError::InvalidNode(format!("variable {letter:?} is not a single lowercase letter")));
        }
        let mut scope_sentence = text(&fields, "sentence_without_quantifier").trim().to_string();
        let mut binder = letter.clone();
        if self.scope.contains(&letter) {
            binder = fresh_name(&letter, |n| self.scope.iter().any(|s| s == n));
            scope_sentence = rename_introduced(sentence, &scope_sentence, &letter, &binder);
        }
        self.last_step().rewrite = vec![scope_sentence.clone()];

        self.scope.push(binder.clone());
        let body = self.parse(&scope_sentence, depth + 1);
        self.scope.pop();
        Ok(Formula::quantified(quantifier, binder, body?))
    }

    fn binary(&mut self, sentence: &str, depth: usize) -> Result<Formula, ParseError> {
        let fields = self.call(SchemaId::LogicalBinary, sentence, depth)?;
        let operator = text(&fields, "operator").to_string();
        let left = text(&fields, "left_operand").trim().to_string();
        let right = text(&fields, "right_operand").trim().to_string();
        if operator == "Not" {
            return Err(ParseError::InvalidNode("Not is unary but was returned with two operands".into()));
        }
        self.last_step().rewrite = vec![left.clone(), right.clone()];
        let l = self.parse(&left, depth + 1)?;
        let r = self.parse(&right, depth + 1)?;
        match operator.as_str() {
            "And" => Ok(Formula::and(l, r)),
            "Or" => Ok(Formula::or(l, r)),
            tag => Ok(desugar_tagged(tag, l, r)?),
        }
    }

    fn unary(&mut self, sentence: &str, depth: usize) -> Result<Formula, ParseError> {
        let fields = self.call(SchemaId::LogicalUnary, sentence, depth)?;
        let operand = text(&fields, "operand").trim().to_string();
        self.last_step().rewrite = vec![operand.clone()];
        Ok(Formula::not(self.parse(&operand, depth + 1)?))
    }

    fn atomic(&mut self, sentence: &str, depth: usize) -> Result<Formula, ParseError> {
        let fields = self.call(SchemaId::AtomicKind, sentence, depth)?;
        let kind = AtomicSchemaKind::from_letter(text(&fields, "answer"))?;
        let fields = self.call(kind.schema(), sentence, depth)?;
        let (predicate, arg_fields) = kind.fields();

        let relation = relation_name(text(&fields, predicate));
        if relation.is_empty() {
            return Err(ParseError::InvalidNode(format!("{predicate} has no usable name")));
        }
        let args = arg_fields
            .iter()
            .map(|field| {
                self.term(text(&fields, field))
                    .ok_or_else(|| ParseError::InvalidNode(format!("{field} has no usable name")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Formula::atom(relation, args))
    }

    fn term(&self, raw: &str) -> Option<Term> {
        let raw = raw.trim();
        if self.scope.iter().any(|v| v == raw) || is_variable_token(raw) {
            return Some(Term::var(raw));
        }
        let name = constant_name(raw);
        (!name.is_empty()).then(|| Term::constant(name))
    }
}

/// A field the schema check already guaranteed to be a non-empty string.
fn text<'a>(fields: &'a Map<String, Value>, key: &str) -> &'a str {
    fields.get(key).and_then(Value::as_str).expect("verified field")
}
