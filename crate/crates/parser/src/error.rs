use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::BackendError;

/// The four ways a sentence can fail to parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorCode {
    MissingNode,
    InvalidNode,
    DepthExceeded,
    LoopDetected,
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCode::MissingNode => "MissingNode",
            ErrorCode::InvalidNode => "InvalidNode",
            ErrorCode::DepthExceeded => "DepthExceeded",
            ErrorCode::LoopDetected => "LoopDetected",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("missing node: {0}")]
    MissingNode(String),
    #[error("invalid node: {0}")]
    InvalidNode(String),
    #[error("recursion deeper than {max_depth}")]
    DepthExceeded { max_depth: usize },
    #[error("loop detected: {sentence:?} revisited on the same path")]
    LoopDetected { sentence: String },
    /// Misconfiguration or an unscripted exchange. Not a model error, so
    /// it carries no [`ErrorCode`] and is never counted in metrics.
    #[error(transparent)]
    Infrastructure(BackendError),
}

impl ParseError {
    pub fn code(&self) -> Option<ErrorCode> {
        match self {
            ParseError::MissingNode(_) => Some(ErrorCode::MissingNode),
            ParseError::InvalidNode(_) => Some(ErrorCode::InvalidNode),
            ParseError::DepthExceeded { .. } => Some(ErrorCode::DepthExceeded),
            ParseError::LoopDetected { .. } => Some(ErrorCode::LoopDetected),
            ParseError::Infrastructure(_) => None,
        }
    }
}

impl From<BackendError> for ParseError {
    fn from(e: BackendError) -> Self {
        match e {
            BackendError::MissingNode(m) => ParseError::MissingNode(m),
            BackendError::InvalidNode(m) => ParseError::InvalidNode(m),
            e if e.code() == Some(ErrorCode::MissingNode) => ParseError::MissingNode(e.to_string()),
            e => ParseError::Infrastructure(e),
        }
    }
}

impl From<folast_core::AstError> for ParseError {
    fn from(e: folast_core::AstError) -> Self {
        match e {
            folast_core::AstError::MissingNode(m) => ParseError::MissingNode(m),
            folast_core::AstError::InvalidNode(m) => ParseError::InvalidNode(m),
        }
    }
}
