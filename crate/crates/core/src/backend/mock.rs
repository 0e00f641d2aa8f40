use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse};

const WORDS: &[&str] = &[
    "easy", "simple", "plain", "clear", "basic", "small", "big", "quick", "slow", "safe",
    "calm", "bright", "strong", "weak", "fresh", "open", "close", "full", "empty", "rough",
    "smooth", "soft", "hard", "light", "dark", "warm", "cold", "sharp", "loose", "tight",
    "common", "usual", "normal", "proper", "whole", "main", "short", "long", "wide", "thin",
    "send", "use", "move", "show", "help", "keep", "start", "stop", "find", "give",
];

const SUGGESTIONS: usize = 10;

type FailureRule = Box<dyn Fn(&CompletionRequest) -> bool + Send + Sync>;

/// Offline backend producing a numbered ten-item list per complex word.
///
/// The list is a shuffle of a bundled word list seeded by the lowercased
/// complex word, so every prompt for the same instance gets the same
/// answer. Responses carry no token usage.
#[derive(Default)]
pub struct MockBackend {
    scripted: HashMap<String, String>,
    fail_when: Option<FailureRule>,
}

impl MockBackend {
    pub fn new() -> Self {
        MockBackend::default()
    }

    /// Fixed completion text for a given complex word.
    pub fn with_response(mut self, complex_word: &str, text: impl Into<String>) -> Self {
        self.scripted.insert(complex_word.to_lowercase(), text.into());
        self
    }

    /// Requests matching `rule` fail with a transport error.
    pub fn fail_when(mut self, rule: impl Fn(&CompletionRequest) -> bool + Send + Sync + 'static) -> Self {
        self.fail_when = Some(Box::new(rule));
        self
    }

    /// The synthetic suggestions for `complex_word`, in response order.
    pub fn suggestions_for(complex_word: &str) -> Vec<&'static str> {
        let digest = Sha256::digest(complex_word.to_lowercase().as_bytes());
        let seed = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut words = WORDS.to_vec();
        words.shuffle(&mut rng);
        words.truncate(SUGGESTIONS);
        words
    }

    pub fn response_for(&self, complex_word: &str) -> String {
        if let Some(text) = self.scripted.get(&complex_word.to_lowercase()) {
            return text.clone();
        }
        let mut out = String::new();
        for (i, word) in Self::suggestions_for(complex_word).iter().enumerate() {
            out.push_str(&format!("\n{}. {}", i + 1, word));
        }
        out
    }
}

/// Recovers the complex word from a rendered prompt: the last quoted span of
/// the final question line, or whatever follows the last `": "` of that line.
pub(crate) fn complex_word_of(prompt: &str) -> &str {
    let line = prompt
        .lines()
        .map(str::trim)
        .rfind(|l| !l.is_empty() && *l != "Answer:")
        .unwrap_or("");
    if let Some(end) = line.rfind('"') {
        if let Some(start) = line[..end].rfind('"') {
            return &line[start + 1..end];
        }
    }
    line.rsplit(": ").next().unwrap_or(line).trim()
}

impl CompletionBackend for MockBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        request.validate()?;
        if self.fail_when.as_ref().is_some_and(|rule| rule(request)) {
            return Err(BackendError::Transport("injected mock failure".into()));
        }
        let word = complex_word_of(&request.prompt);
        Ok(CompletionResponse::text_only(self.response_for(word)))
    }
}
