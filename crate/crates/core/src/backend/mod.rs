//! Completion providers.
//!
//! Every provider implements [`CompletionBackend`]. Three are included:
//! [`ApiBackend`] talks to a remote completion endpoint, [`ReplayBackend`]
//! serves recorded responses from a [`FixtureStore`], and [`MockBackend`]
//! synthesizes numbered lists offline. [`RecordingBackend`] wraps any of them
//! and captures fixtures as it goes.

mod api;
mod fixtures;
mod mock;

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use api::{ApiBackend, HttpReply, HttpTransport, RetryPolicy, Sleeper, ThreadSleeper, UreqTransport};
pub use fixtures::{FixtureError, FixtureRecord, FixtureStore, RecordingBackend, ReplayBackend};
pub use mock::MockBackend;

pub const DEFAULT_MODEL: &str = "text-davinci-002";
pub const DEFAULT_MAX_TOKENS: u32 = 256;
pub const DEFAULT_FREQUENCY_PENALTY: f64 = 0.5;
pub const DEFAULT_PRESENCE_PENALTY: f64 = 0.3;

/// Environment variable holding the API token.
pub const AUTH_ENV_VAR: &str = "OPENAI_API_KEY";

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("giving up after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: u32, last: String },
    #[error("rate limit still exceeded after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("authentication missing: set the {0} environment variable")]
    MissingAuth(&'static str),
    #[error("authentication rejected (HTTP {status}): {message}")]
    AuthRejected { status: u16, message: String },
    #[error("provider returned HTTP {status}: {message}")]
    Provider { status: u16, message: String },
    #[error("no recorded response for request {0}")]
    ReplayMiss(RequestKey),
    #[error("malformed provider payload: {0}")]
    Malformed(String),
}

impl BackendError {
    /// Whether another attempt could succeed.
    pub fn is_retryable(&self) -> bool {
        matches!(self, BackendError::Transport(_))
    }
}

/// One completion call with its generation settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub model_id: String,
    pub prompt: String,
    pub max_tokens: u32,
    pub temperature: f64,
    pub frequency_penalty: f64,
    pub presence_penalty: f64,
}

impl CompletionRequest {
    /// A request with the default model, length limit and penalties.
    pub fn new(prompt: impl Into<String>, temperature: f64) -> Self {
        CompletionRequest {
            model_id: DEFAULT_MODEL.to_string(),
            prompt: prompt.into(),
            max_tokens: DEFAULT_MAX_TOKENS,
            temperature,
            frequency_penalty: DEFAULT_FREQUENCY_PENALTY,
            presence_penalty: DEFAULT_PRESENCE_PENALTY,
        }
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        let bad = |msg: String| Err(BackendError::InvalidRequest(msg));
        if self.max_tokens < 1 {
            return bad("max_tokens must be at least 1".into());
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return bad(format!("temperature {} outside [0, 2]", self.temperature));
        }
        for (name, value) in [
            ("frequency_penalty", self.frequency_penalty),
            ("presence_penalty", self.presence_penalty),
        ] {
            if !(-2.0..=2.0).contains(&value) {
                return bad(format!("{name} {value} outside [-2, 2]"));
            }
        }
        Ok(())
    }

    /// Fixed-order, locale-independent text form used for hashing.
    pub fn canonical(&self) -> String {
        fn num(x: f64) -> String {
            // -0.0 and 0.0 are the same setting
            let x = if x == 0.0 { 0.0 } else { x };
            format!("{x:?}")
        }
        format!(
            "model_id={}\nprompt={}\nmax_tokens={}\ntemperature={}\nfrequency_penalty={}\npresence_penalty={}\n",
            serde_json::to_string(&self.model_id).expect("string serializes"),
            serde_json::to_string(&self.prompt).expect("string serializes"),
            self.max_tokens,
            num(self.temperature),
            num(self.frequency_penalty),
            num(self.presence_penalty),
        )
    }

    pub fn key(&self) -> RequestKey {
        let digest = Sha256::digest(self.canonical().as_bytes());
        RequestKey(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub text: String,
    #[serde(default)]
    pub prompt_tokens: u64,
    #[serde(default)]
    pub completion_tokens: u64,
}

impl CompletionResponse {
    pub fn text_only(text: impl Into<String>) -> Self {
        CompletionResponse {
            text: text.into(),
            ..Default::default()
        }
    }

    /// Provider-reported usage, if any was reported.
    pub fn reported_tokens(&self) -> Option<u64> {
        let total = self.prompt_tokens + self.completion_tokens;
        (total > 0).then_some(total)
    }
}

/// SHA-256 of a request's canonical form, lowercase hex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RequestKey(String);

impl RequestKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RequestKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub trait CompletionBackend: Send + Sync {
    /// Returns the provider's completion text verbatim.
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError>;
}

impl<B: CompletionBackend + ?Sized> CompletionBackend for &B {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        (**self).complete(request)
    }
}

impl<B: CompletionBackend + ?Sized> CompletionBackend for Box<B> {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        (**self).complete(request)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_match_generation_settings() {
        let req = CompletionRequest::new("p", 0.3);
        assert_eq!(req.model_id, "text-davinci-002");
        assert_eq!(req.max_tokens, 256);
        assert_eq!(req.frequency_penalty, 0.5);
        assert_eq!(req.presence_penalty, 0.3);
        req.validate().unwrap();
    }

    #[test]
    fn validation_bounds() {
        let mut req = CompletionRequest::new("p", 2.5);
        assert!(req.validate().is_err());
        req.temperature = 1.0;
        req.max_tokens = 0;
        assert!(req.validate().is_err());
        req.max_tokens = 1;
        req.presence_penalty = -2.1;
        assert!(req.validate().is_err());
    }

    #[test]
    fn canonical_form_is_stable() {
        let req = CompletionRequest::new("Context: a\n\"b\"", 0.3);
        assert_eq!(
            req.canonical(),
            "model_id=\"text-davinci-002\"\nprompt=\"Context: a\\n\\\"b\\\"\"\nmax_tokens=256\ntemperature=0.3\nfrequency_penalty=0.5\npresence_penalty=0.3\n"
        );
        // frozen digest of the canonical form above
        assert_eq!(
            req.key().as_str(),
            "5a8c8f0308c0b31a78f235cb32e3c3b4e2e915507164101700dafd5a8b7e5333"
        );
    }

    #[test]
    fn negative_zero_normalized() {
        let a = CompletionRequest::new("p", 0.0);
        let b = CompletionRequest::new("p", -0.0);
        assert_eq!(a.key(), b.key());
    }

    proptest! {
        #[test]
        fn any_field_change_changes_key(prompt in ".{0,40}", t in 0.0f64..2.0, dt in 0.01f64..0.5) {
            let base = CompletionRequest::new(prompt.clone(), t);
            let mut other = base.clone();
            other.temperature = (t + dt).min(2.0);
            if other.temperature != base.temperature {
                prop_assert_ne!(base.key(), other.key());
            }
            let mut other = base.clone();
            other.prompt.push('x');
            prop_assert_ne!(base.key(), other.key());
            let mut other = base.clone();
            other.max_tokens += 1;
            prop_assert_ne!(base.key(), other.key());
            let mut other = base.clone();
            other.model_id.push('x');
            prop_assert_ne!(base.key(), other.key());
        }
    }
}
