//! Natural-language to first-order logic parsing through a structured-output
//! completion backend.
//!
//! - [`backend`]: the completion interface, a scripted stub and an HTTP client
//! - [`schema`] and [`prompt`]: the per-step response schemas and prompts
//! - [`parser`]: the recursive selector/sub-parser loop with its guards
//! - [`preprocess`]: sentence segmentation

pub mod backend;
pub mod error;
pub mod parser;
pub mod preprocess;
pub mod prompt;
pub mod schema;

pub use backend::{
    BackendError, BackendResponse, CompletionBackend, HttpBackend, HttpConfig, PromptRequest, ScriptedBackend,
};
pub use error::{ErrorCode, ParseError};
pub use parser::{AtomicSchemaKind, ParseOutput, ParseTrace, ParserConfig, SemanticParser, SentenceClass};
pub use schema::SchemaId;
