//! Structured-output completion backends.
//!
//! A backend turns a [`PromptRequest`] into raw completion text. The shared
//! [`CompletionBackend::complete_structured`] then parses the text and checks
//! it against the request schema, so every response ends up as exactly one
//! of: a valid document, a missing node, or an invalid node.

mod http;
mod scripted;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use http::{HttpBackend, HttpConfig};
pub use scripted::{ScriptRecord, ScriptedBackend};

use crate::error::ErrorCode;
use crate::prompt;
use crate::schema::SchemaId;

pub const DEFAULT_MAX_TOKENS: u32 = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    /// Unparseable or truncated output, or a transport failure that
    /// outlived its retries.
    #[error("missing node: {0}")]
    MissingNode(String),
    /// Well-formed output with an empty or unknown required value.
    #[error("invalid node: {0}")]
    InvalidNode(String),
    #[error("backend timed out after {0:?}")]
    Timeout(Duration),
    #[error("no scripted response for schema {schema} and input {input:?}")]
    Unscripted { schema: SchemaId, input: String },
    #[error("endpoint rejected the request with status {status}: {detail}")]
    Rejected { status: u16, detail: String },
    #[error("backend configuration: {0}")]
    Config(String),
}

impl BackendError {
    /// Metric classification; `None` for infrastructure failures.
    pub fn code(&self) -> Option<ErrorCode> {
        match self {
            BackendError::MissingNode(_) | BackendError::Timeout(_) => Some(ErrorCode::MissingNode),
            BackendError::InvalidNode(_) => Some(ErrorCode::InvalidNode),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptRequest {
    pub system_prompt: String,
    pub user_input: String,
    pub schema: SchemaId,
    pub max_tokens: u32,
    pub temperature: f64,
}

impl PromptRequest {
    /// The shipped prompt for `schema` with `sentence` filled in.
    pub fn new(schema: SchemaId, sentence: &str) -> Self {
        PromptRequest {
            system_prompt: prompt::render(schema, sentence),
            user_input: sentence.to_string(),
            schema,
            max_tokens: DEFAULT_MAX_TOKENS,
            temperature: 0.0,
        }
    }

    fn check(&self) -> Result<(), BackendError> {
        if self.user_input.trim().is_empty() {
            return Err(BackendError::Config("empty user input".into()));
        }
        if self.max_tokens == 0 {
            return Err(BackendError::Config("max_tokens must be positive".into()));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(BackendError::Config(format!("bad temperature {}", self.temperature)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

/// Raw completion text as returned by the transport.
#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub text: String,
    pub usage: Option<Usage>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackendResponse {
    /// The verified document, keys in canonical spelling.
    pub document: Value,
    pub raw: String,
    pub usage: Option<Usage>,
}

pub trait CompletionBackend: Send + Sync {
    fn complete(&self, request: &PromptRequest) -> Result<Completion, BackendError>;

    fn complete_structured(&self, request: &PromptRequest) -> Result<BackendResponse, BackendError> {
        request.check()?;
        let completion = self.complete(request)?;
        classify(request.schema, completion)
    }
}

impl<B: CompletionBackend + ?Sized> CompletionBackend for std::sync::Arc<B> {
    fn complete(&self, request: &PromptRequest) -> Result<Completion, BackendError> {
        (**self).complete(request)
    }
}

/// Strips a surrounding Markdown code fence, if any.
fn unfence(text: &str) -> &str {
    let t = text.trim();
    let Some(rest) = t.strip_prefix("```") else { return t };
    let rest = rest.trim_start_matches(|c: char| c.is_ascii_alphanumeric());
    rest.strip_suffix("```").unwrap_or(rest).trim()
}

/// Parses completion text and checks it against `schema`.
pub fn classify(schema: SchemaId, completion: Completion) -> Result<BackendResponse, BackendError> {
    let document: Value = serde_json::from_str(unfence(&completion.text))
        .map_err(|e| BackendError::MissingNode(format!("{schema}: unparseable output ({e})")))?;
    let fields = schema.verify(&document)?;
    Ok(BackendResponse { document: Value::Object(fields), raw: completion.text, usage: completion.usage })
}
