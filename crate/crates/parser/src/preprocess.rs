//! Sentence segmentation.
//!
//! The rule-based default splits after `.`, `!` or `?` (plus any closing
//! quotes or brackets) when whitespace and a capitalized word follow, unless
//! the word carrying the terminator is a known abbreviation. An external
//! segmenter can be attached as a subprocess (document on standard input,
//! one sentence per output line) or an HTTP endpoint returning a JSON array.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::Duration;

use thiserror::Error;

pub const DEFAULT_ABBREVIATIONS: [&str; 19] = [
    "Prof.", "Dr.", "Mr.", "Mrs.", "Ms.", "St.", "Jr.", "Sr.", "Mt.", "Inc.", "Ltd.", "Co.", "vs.", "etc.", "e.g.",
    "i.e.", "U.S.", "U.K.", "No.",
];

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("segmenter configuration: {0}")]
    Config(String),
    #[error("external segmenter failed: {0}")]
    External(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum External {
    /// Whitespace-separated command line.
    Command(String),
    /// URL accepting `{"text": ...}` and returning an array of strings.
    Endpoint(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmenterMode {
    RuleBased,
    External(External),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmenterConfig {
    pub mode: SegmenterMode,
    pub abbreviations: BTreeSet<String>,
    /// Use the rule-based splitter when the external one fails.
    pub fallback: bool,
    pub timeout: Duration,
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        SegmenterConfig {
            mode: SegmenterMode::RuleBased,
            abbreviations: DEFAULT_ABBREVIATIONS.iter().map(|s| s.to_string()).collect(),
            fallback: false,
            timeout: Duration::from_secs(30),
        }
    }
}

impl SegmenterConfig {
    /// Adds abbreviations from a file, one per line; `#` starts a comment.
    pub fn load_abbreviations(&mut self, path: impl AsRef<Path>) -> Result<(), SegmentError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| SegmentError::Config(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines() {
            let entry = line.split('#').next().unwrap_or("").trim();
            if !entry.is_empty() {
                self.abbreviations.insert(entry.to_string());
            }
        }
        Ok(())
    }
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '”' | '’')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '“' | '‘')
}

/// Rule-based segmentation. Returned sentences are trimmed slices of the input.
pub fn segment_rules(document: &str, abbreviations: &BTreeSet<String>) -> Vec<String> {
    let chars: Vec<(usize, char)> = document.char_indices().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (_, c) = chars[i];
        if !matches!(c, '.' | '!' | '?') {
            i += 1;
            continue;
        }
        let mut end = i + 1;
        while end < chars.len() && (matches!(chars[end].1, '.' | '!' | '?') || is_closer(chars[end].1)) {
            end += 1;
        }
        let mut next = end;
        while next < chars.len() && chars[next].1.is_whitespace() {
            next += 1;
        }
        let mut word = next;
        while word < chars.len() && is_opener(chars[word].1) {
            word += 1;
        }
        let boundary = next > end && word < chars.len() && chars[word].1.is_uppercase();
        let byte_end = chars.get(end).map_or(document.len(), |(b, _)| *b);
        let token_start = document[..byte_end]
            .rfind(char::is_whitespace)
            .map_or(0, |b| b + document[b..].chars().next().map_or(1, char::len_utf8));
        let token = document[token_start..byte_end].trim_end_matches(is_closer);
        let token = token.trim_start_matches(is_opener);
        if boundary && !abbreviations.contains(token) {
            let s = document[start..byte_end].trim();
            if !s.is_empty() {
                sentences.push(s.to_string());
            }
            start = byte_end;
        }
        i = end;
    }
    let tail = document[start..].trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    sentences
}

fn run_command(command: &str, document: &str, timeout: Duration) -> Result<Vec<String>, SegmentError> {
    let mut parts = command.split_whitespace();
    let program = parts.next().ok_or_else(|| SegmentError::Config("empty segmenter command".into()))?;
    let mut child = Command::new(program)
        .args(parts)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| SegmentError::External(format!("cannot start {program}: {e}")))?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let input = document.to_string();
    let writer = std::thread::spawn(move || {
        let _ = stdin.write_all(input.as_bytes());
    });
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(child.wait_with_output());
    });
    let output = rx
        .recv_timeout(timeout)
        .map_err(|_| SegmentError::External(format!("{program} timed out after {timeout:?}")))?
        .map_err(|e| SegmentError::External(e.to_string()))?;
    let _ = writer.join();
    if !output.status.success() {
        return Err(SegmentError::External(format!(
            "{program} exited with {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        )));
    }
    Ok(String::from_utf8_lossy(&output.stdout)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

fn call_endpoint(url: &str, document: &str, timeout: Duration) -> Result<Vec<String>, SegmentError> {
    let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into();
    let sentences: Vec<String> = agent
        .post(url)
        .send_json(serde_json::json!({ "text": document }))
        .map_err(|e| SegmentError::External(e.to_string()))?
        .body_mut()
        .read_json()
        .map_err(|e| SegmentError::External(format!("bad response: {e}")))?;
    Ok(sentences.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
}

/// Splits a document into sentences.
pub fn segment(document: &str, cfg: &SegmenterConfig) -> Result<Vec<String>, SegmentError> {
    let external = match &cfg.mode {
        SegmenterMode::RuleBased => return Ok(segment_rules(document, &cfg.abbreviations)),
        SegmenterMode::External(External::Command(c)) if c.trim().is_empty() => {
            return Err(SegmentError::Config("external mode requires a command".into()))
        }
        SegmenterMode::External(External::Endpoint(u)) if u.trim().is_empty() => {
            return Err(SegmentError::Config("external mode requires an endpoint".into()))
        }
        SegmenterMode::External(External::Command(c)) => run_command(c, document, cfg.timeout),
        SegmenterMode::External(External::Endpoint(u)) => call_endpoint(u, document, cfg.timeout),
    };
    match external {
        Err(e) if cfg.fallback => {
            log::warn!("{e}; falling back to rule-based segmentation");
            Ok(segment_rules(document, &cfg.abbreviations))
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(doc: &str) -> Vec<String> {
        segment(doc, &SegmenterConfig::default()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(rules("Prof. Smith teaches. Students learn."), ["Prof. Smith teaches.", "Students learn."]);
        assert_eq!(rules("Alice sings."), ["Alice sings."]);
        assert!(rules("").is_empty());
        assert!(rules("   \n ").is_empty());
    }

    #[test]
    fn abbreviations_and_punctuation() {
        assert_eq!(
            rules("She moved to the U.S. in May. Dr. Who agreed! Did he? \"Yes.\" Fine"),
            ["She moved to the U.S. in May.", "Dr. Who agreed!", "Did he?", "\"Yes.\"", "Fine"]
        );
        assert_eq!(rules("Pi is 3.14 today. ok then."), ["Pi is 3.14 today. ok then."]);
        assert_eq!(rules("Wait... What?"), ["Wait...", "What?"]);
    }

    #[test]
    fn user_abbreviations() {
        let dir = std::env::temp_dir().join(format!("folast-abbr-{}", std::process::id()));
        std::fs::write(&dir, "# extra\nApprox.\n").unwrap();
        let mut cfg = SegmenterConfig::default();
        cfg.load_abbreviations(&dir).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(segment("Approx. Ten people came.", &cfg).unwrap(), ["Approx. Ten people came."]);
    }

    #[test]
    fn external_command_and_fallback() {
        let cfg = SegmenterConfig {
            mode: SegmenterMode::External(External::Command("tr . \\n".into())),
            ..SegmenterConfig::default()
        };
        assert_eq!(segment("A b. C d.", &cfg).unwrap(), ["A b", "C d"]);

        let broken = SegmenterConfig {
            mode: SegmenterMode::External(External::Command("definitely-missing-segmenter".into())),
            ..SegmenterConfig::default()
        };
        assert!(matches!(segment("A b. C d.", &broken), Err(SegmentError::External(_))));
        let with_fallback = SegmenterConfig { fallback: true, ..broken };
        assert_eq!(segment("A b. C d.", &with_fallback).unwrap(), ["A b.", "C d."]);

        let empty = SegmenterConfig {
            mode: SegmenterMode::External(External::Endpoint(" ".into())),
            ..SegmenterConfig::default()
        };
        assert!(matches!(segment("x", &empty), Err(SegmentError::Config(_))));
    }
}
