//! Record/replay fixture storage.
//!
//! A fixture file holds one JSON object per line:
//!
//! ```text
//! {"key":"<sha256>","request":{...},"text":"...","prompt_tokens":0,"completion_tokens":0}
//! ```
//!
//! `key` must equal the digest of `request`. Records are written sorted by
//! key so saving the same store twice yields identical bytes.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse, RequestKey};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixtures {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write fixtures {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("fixture record {record}: {message}")]
    Corrupt { record: usize, message: String },
    #[error("conflicting responses recorded for request {0}")]
    Conflict(RequestKey),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub key: RequestKey,
    pub request: CompletionRequest,
    pub text: String,
    #[serde(default)]
    pub prompt_tokens: u64,
    #[serde(default)]
    pub completion_tokens: u64,
}

impl FixtureRecord {
    fn response(&self) -> CompletionResponse {
        CompletionResponse {
            text: self.text.clone(),
            prompt_tokens: self.prompt_tokens,
            completion_tokens: self.completion_tokens,
        }
    }
}

/// Recorded responses keyed by request digest.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixtureStore {
    records: BTreeMap<RequestKey, FixtureRecord>,
}

impl FixtureStore {
    pub fn new() -> Self {
        FixtureStore::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, request: &CompletionRequest) -> Option<CompletionResponse> {
        self.records.get(&request.key()).map(FixtureRecord::response)
    }

    pub fn records(&self) -> impl Iterator<Item = &FixtureRecord> {
        self.records.values()
    }

    /// Adds a record. Re-recording an identical response is a no-op; a
    /// different response for the same request is a conflict.
    pub fn record(
        &mut self,
        request: &CompletionRequest,
        response: &CompletionResponse,
    ) -> Result<(), FixtureError> {
        let key = request.key();
        let record = FixtureRecord {
            key: key.clone(),
            request: request.clone(),
            text: response.text.clone(),
            prompt_tokens: response.prompt_tokens,
            completion_tokens: response.completion_tokens,
        };
        self.insert(record)
    }

    fn insert(&mut self, record: FixtureRecord) -> Result<(), FixtureError> {
        match self.records.entry(record.key.clone()) {
            Entry::Vacant(slot) => {
                slot.insert(record);
                Ok(())
            }
            Entry::Occupied(existing) if existing.get().response() == record.response() => Ok(()),
            Entry::Occupied(existing) => Err(FixtureError::Conflict(existing.key().clone())),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let mut store = FixtureStore::new();
        let lines = text.lines().filter(|l| !l.trim().is_empty());
        for (i, line) in lines.enumerate() {
            let record_no = i + 1;
            let record: FixtureRecord =
                serde_json::from_str(line).map_err(|e| FixtureError::Corrupt {
                    record: record_no,
                    message: e.to_string(),
                })?;
            if record.request.key() != record.key {
                return Err(FixtureError::Corrupt {
                    record: record_no,
                    message: format!("key {} does not match its request", record.key),
                });
            }
            store.insert(record)?;
        }
        Ok(store)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in self.records.values() {
            out.push_str(&serde_json::to_string(record).expect("fixture record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        let text = fs::read_to_string(path).map_err(|source| FixtureError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), FixtureError> {
        fs::write(path, self.to_jsonl()).map_err(|source| FixtureError::Write {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Serves responses from a fixture store; never touches the network.
#[derive(Debug, Clone, Default)]
pub struct ReplayBackend {
    store: FixtureStore,
}

impl ReplayBackend {
    pub fn new(store: FixtureStore) -> Self {
        ReplayBackend { store }
    }

    pub fn from_path(path: &Path) -> Result<Self, FixtureError> {
        FixtureStore::load(path).map(Self::new)
    }

    pub fn store(&self) -> &FixtureStore {
        &self.store
    }
}

impl CompletionBackend for ReplayBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        request.validate()?;
        self.store
            .get(request)
            .ok_or_else(|| BackendError::ReplayMiss(request.key()))
    }
}

/// Passes requests through to `inner` and records every response.
///
/// A request already in the store is answered from the store, so a run that
/// repeats a request replays exactly what was recorded.
pub struct RecordingBackend<B> {
    inner: B,
    store: Mutex<FixtureStore>,
}

impl<B: CompletionBackend> RecordingBackend<B> {
    pub fn new(inner: B) -> Self {
        Self::with_store(inner, FixtureStore::new())
    }

    pub fn with_store(inner: B, store: FixtureStore) -> Self {
        RecordingBackend {
            inner,
            store: Mutex::new(store),
        }
    }

    pub fn snapshot(&self) -> FixtureStore {
        self.store.lock().expect("fixture lock").clone()
    }

    pub fn into_store(self) -> FixtureStore {
        self.store.into_inner().expect("fixture lock")
    }
}

impl<B: CompletionBackend> CompletionBackend for RecordingBackend<B> {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        if let Some(found) = self.store.lock().expect("fixture lock").get(request) {
            return Ok(found);
        }
        let response = self.inner.complete(request)?;
        let mut store = self.store.lock().expect("fixture lock");
        // another thread may have recorded the same request meanwhile
        if let Some(found) = store.get(request) {
            return Ok(found);
        }
        store
            .record(request, &response)
            .expect("vacant key cannot conflict");
        Ok(response)
    }
}
