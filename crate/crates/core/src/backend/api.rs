use std::sync::Mutex;
use std::thread::{self, ThreadId};
use std::time::{Duration, Instant};

use serde::Deserialize;
use serde_json::json;

use super::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse, AUTH_ENV_VAR};

pub const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/completions";

/// Status and body of one HTTP exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpReply {
    pub status: u16,
    pub body: String,
}

/// Sends a JSON body with bearer authentication. `Err` means no HTTP
/// response was obtained at all.
pub trait HttpTransport: Send + Sync {
    fn post_json(&self, url: &str, token: &str, body: &str) -> Result<HttpReply, String>;
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build()
            .into();
        UreqTransport { agent }
    }
}

impl Default for UreqTransport {
    fn default() -> Self {
        Self::new(Duration::from_secs(60))
    }
}

impl HttpTransport for UreqTransport {
    fn post_json(&self, url: &str, token: &str, body: &str) -> Result<HttpReply, String> {
        let mut response = self
            .agent
            .post(url)
            .header("Authorization", format!("Bearer {token}"))
            .content_type("application/json")
            .send(body)
            .map_err(|e| e.to_string())?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| e.to_string())?;
        Ok(HttpReply { status, body })
    }
}

pub trait Sleeper: Send + Sync {
    fn sleep(&self, duration: Duration);
}

pub struct ThreadSleeper;

impl Sleeper for ThreadSleeper {
    fn sleep(&self, duration: Duration) {
        thread::sleep(duration);
    }
}

/// Bounded exponential backoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub initial_delay: Duration,
    pub factor: f64,
    pub max_attempts: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            initial_delay: Duration::from_secs(1),
            factor: 2.0,
            max_attempts: 5,
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (0 = the first retry).
    pub fn delay(&self, retry: u32) -> Duration {
        let factor = self.factor.max(1.0);
        self.initial_delay.mul_f64(factor.powi(retry as i32))
    }
}

#[derive(Debug, Default)]
struct Cooldown {
    until: Option<Instant>,
    owner: Option<ThreadId>,
}

/// Remote completion endpoint client.
///
/// Retries transport failures, 5xx and 429 responses under a
/// [`RetryPolicy`]. A 429 also starts a shared cooldown that other threads
/// using the same backend wait out before sending.
pub struct ApiBackend {
    endpoint: String,
    token: String,
    policy: RetryPolicy,
    transport: Box<dyn HttpTransport>,
    sleeper: Box<dyn Sleeper>,
    cooldown: Mutex<Cooldown>,
}

impl std::fmt::Debug for ApiBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ApiBackend")
            .field("endpoint", &self.endpoint)
            .field("policy", &self.policy)
            .finish_non_exhaustive()
    }
}

#[derive(Deserialize)]
struct WireChoice {
    text: String,
}

#[derive(Deserialize, Default)]
struct WireUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

impl ApiBackend {
    pub fn new(token: impl Into<String>) -> Self {
        ApiBackend {
            endpoint: DEFAULT_ENDPOINT.to_string(),
            token: token.into(),
            policy: RetryPolicy::default(),
            transport: Box::new(UreqTransport::default()),
            sleeper: Box::new(ThreadSleeper),
            cooldown: Mutex::new(Cooldown::default()),
        }
    }

    /// Reads the token from [`AUTH_ENV_VAR`].
    pub fn from_env() -> Result<Self, BackendError> {
        match std::env::var(AUTH_ENV_VAR) {
            Ok(token) if !token.trim().is_empty() => Ok(Self::new(token.trim())),
            _ => Err(BackendError::MissingAuth(AUTH_ENV_VAR)),
        }
    }

    pub fn with_endpoint(mut self, endpoint: impl Into<String>) -> Self {
        self.endpoint = endpoint.into();
        self
    }

    pub fn with_policy(mut self, policy: RetryPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_transport(mut self, transport: impl HttpTransport + 'static) -> Self {
        self.transport = Box::new(transport);
        self
    }

    pub fn with_sleeper(mut self, sleeper: impl Sleeper + 'static) -> Self {
        self.sleeper = Box::new(sleeper);
        self
    }

    pub fn request_body(request: &CompletionRequest) -> String {
        json!({
            "model": request.model_id,
            "prompt": request.prompt,
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
            "frequency_penalty": request.frequency_penalty,
            "presence_penalty": request.presence_penalty,
        })
        .to_string()
    }

    pub fn parse_reply(body: &str) -> Result<CompletionResponse, BackendError> {
        let wire: WireResponse =
            serde_json::from_str(body).map_err(|e| BackendError::Malformed(e.to_string()))?;
        let choice = wire
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| BackendError::Malformed("no choices in response".into()))?;
        let usage = wire.usage.unwrap_or_default();
        Ok(CompletionResponse {
            text: choice.text,
            prompt_tokens: usage.prompt_tokens,
            completion_tokens: usage.completion_tokens,
        })
    }

    fn wait_for_cooldown(&self) {
        let remaining = {
            let cooldown = self.cooldown.lock().expect("cooldown lock");
            match (cooldown.until, cooldown.owner) {
                (Some(until), Some(owner)) if owner != thread::current().id() => {
                    until.checked_duration_since(Instant::now())
                }
                _ => None,
            }
        };
        if let Some(wait) = remaining {
            self.sleeper.sleep(wait);
        }
    }

    fn start_cooldown(&self, length: Duration) {
        let mut cooldown = self.cooldown.lock().expect("cooldown lock");
        let until = Instant::now() + length;
        if cooldown.until.is_none_or(|current| current < until) {
            cooldown.until = Some(until);
            cooldown.owner = Some(thread::current().id());
        }
    }
}

fn summarize(body: &str) -> String {
    let mut text: String = body.chars().take(200).collect();
    if body.chars().count() > 200 {
        text.push('…');
    }
    text
}

impl CompletionBackend for ApiBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        request.validate()?;
        let body = Self::request_body(request);
        let attempts = self.policy.max_attempts.max(1);
        let mut rate_limited = false;
        let mut last_error = String::new();

        for attempt in 0..attempts {
            if attempt > 0 {
                self.sleeper.sleep(self.policy.delay(attempt - 1));
            }
            self.wait_for_cooldown();
            match self.transport.post_json(&self.endpoint, &self.token, &body) {
                Err(message) => {
                    log::warn!("attempt {}: transport failure: {message}", attempt + 1);
                    rate_limited = false;
                    last_error = message;
                }
                Ok(reply) => match reply.status {
                    200..=299 => return Self::parse_reply(&reply.body),
                    401 | 403 => {
                        return Err(BackendError::AuthRejected {
                            status: reply.status,
                            message: summarize(&reply.body),
                        })
                    }
                    429 => {
                        log::warn!("attempt {}: rate limited", attempt + 1);
                        self.start_cooldown(self.policy.delay(attempt));
                        rate_limited = true;
                        last_error = summarize(&reply.body);
                    }
                    500..=599 => {
                        log::warn!("attempt {}: HTTP {}", attempt + 1, reply.status);
                        rate_limited = false;
                        last_error = format!("HTTP {}: {}", reply.status, summarize(&reply.body));
                    }
                    status => {
                        return Err(BackendError::Provider {
                            status,
                            message: summarize(&reply.body),
                        })
                    }
                },
            }
        }
        if rate_limited {
            Err(BackendError::RateLimited { attempts })
        } else {
            Err(BackendError::RetriesExhausted {
                attempts,
                last: last_error,
            })
        }
    }
}
