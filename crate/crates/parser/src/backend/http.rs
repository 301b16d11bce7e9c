use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde_json::{json, Value};

use super::{BackendError, Completion, CompletionBackend, PromptRequest, Usage};

#[derive(Debug, Clone)]
pub struct HttpConfig {
    /// Full chat-completions URL, e.g. `http://localhost:8000/v1/chat/completions`.
    pub endpoint: String,
    pub model: String,
    pub api_key: Option<String>,
    /// Per attempt.
    pub timeout: Duration,
    /// Extra attempts after a transport failure. Schema failures are never retried.
    pub retries: u32,
    pub concurrency: usize,
    /// Send the schema as a `response_format` field.
    pub structured_output: bool,
}

impl HttpConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        HttpConfig {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key: None,
            timeout: Duration::from_secs(60),
            retries: 2,
            concurrency: 4,
            structured_output: true,
        }
    }
}

struct Semaphore {
    free: Mutex<usize>,
    cond: Condvar,
}

struct Permit<'a>(&'a Semaphore);

impl Semaphore {
    fn new(n: usize) -> Self {
        Semaphore { free: Mutex::new(n.max(1)), cond: Condvar::new() }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().expect("semaphore lock");
        while *free == 0 {
            free = self.cond.wait(free).expect("semaphore lock");
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().expect("semaphore lock") += 1;
        self.0.cond.notify_one();
    }
}

enum Attempt {
    Done(Result<Completion, BackendError>),
    /// Worth another try; carries the error to report if none is left.
    Transient(BackendError),
}

/// Client for an OpenAI-style chat-completions endpoint.
pub struct HttpBackend {
    config: HttpConfig,
    agent: ureq::Agent,
    permits: Semaphore,
}

impl HttpBackend {
    pub fn new(config: HttpConfig) -> Result<Self, BackendError> {
        if config.endpoint.trim().is_empty() {
            return Err(BackendError::Config("endpoint URL is required".into()));
        }
        if config.model.trim().is_empty() {
            return Err(BackendError::Config("model name is required".into()));
        }
        if config.timeout.is_zero() {
            return Err(BackendError::Config("timeout must be positive".into()));
        }
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let permits = Semaphore::new(config.concurrency);
        Ok(HttpBackend { config, agent, permits })
    }

    pub fn config(&self) -> &HttpConfig {
        &self.config
    }

    fn body(&self, request: &PromptRequest) -> Value {
        let mut body = json!({
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_input},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        });
        if self.config.structured_output {
            body["response_format"] = json!({
                "type": "json_schema",
                "json_schema": {
                    "name": request.schema.as_str(),
                    "schema": request.schema.definition(),
                    "strict": true,
                },
            });
        }
        body
    }

    fn attempt(&self, body: &Value) -> Attempt {
        let mut req = self.agent.post(&self.config.endpoint).header("Content-Type", "application/json");
        if let Some(key) = &self.config.api_key {
            req = req.header("Authorization", format!("Bearer {key}"));
        }
        let mut response = match req.send_json(body) {
            Ok(r) => r,
            Err(ureq::Error::Timeout(_)) => return Attempt::Transient(BackendError::Timeout(self.config.timeout)),
            Err(e @ (ureq::Error::BadUri(_) | ureq::Error::Http(_) | ureq::Error::InvalidProxyUrl)) => {
                return Attempt::Done(Err(BackendError::Config(e.to_string())))
            }
            Err(e) => return Attempt::Transient(BackendError::MissingNode(format!("transport failure: {e}"))),
        };
        let status = response.status().as_u16();
        let text = match response.body_mut().read_to_string() {
            Ok(t) => t,
            Err(ureq::Error::Timeout(_)) => return Attempt::Transient(BackendError::Timeout(self.config.timeout)),
            Err(e) => return Attempt::Transient(BackendError::MissingNode(format!("transport failure: {e}"))),
        };
        if status == 429 || status >= 500 {
            return Attempt::Transient(BackendError::MissingNode(format!("endpoint status {status}")));
        }
        if status >= 400 {
            return Attempt::Done(Err(BackendError::Rejected { status, detail: text }));
        }
        Attempt::Done(parse_chat_response(&text))
    }
}

fn parse_chat_response(text: &str) -> Result<Completion, BackendError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| BackendError::MissingNode(format!("unreadable endpoint response ({e})")))?;
    let content = value["choices"][0]["message"]["content"]
        .as_str()
        .ok_or_else(|| BackendError::MissingNode("endpoint response has no message content".into()))?;
    let usage = value.get("usage").and_then(|u| {
        Some(Usage {
            prompt_tokens: u.get("prompt_tokens")?.as_u64()?,
            completion_tokens: u.get("completion_tokens")?.as_u64()?,
        })
    });
    Ok(Completion { text: content.to_string(), usage })
}

impl CompletionBackend for HttpBackend {
    fn complete(&self, request: &PromptRequest) -> Result<Completion, BackendError> {
        let body = self.body(request);
        let _permit = self.permits.acquire();
        let mut last = None;
        for attempt in 0..=self.config.retries {
            match self.attempt(&body) {
                Attempt::Done(result) => return result,
                Attempt::Transient(e) => {
                    log::warn!("attempt {} of {} failed: {e}", attempt + 1, self.config.retries + 1);
                    last = Some(e);
                }
            }
        }
        Err(last.expect("at least one attempt"))
    }
}
