//! Domain types shared by every stage, plus the tab-separated dataset and
//! submission formats.
//!
//! Datasets are UTF-8, one instance per line:
//!
//! ```text
//! <sentence>\t<complex_word>                       input
//! <sentence>\t<complex_word>\t<sub1>...\t<subN>    gold
//! <sentence>\t<complex_word>\t<pred1>...\t<predK>  submission, K <= 10
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

/// Maximum number of suggestions kept per instance.
pub const MAX_CANDIDATES: usize = 10;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("line {line}: expected at least {expected} tab-separated fields, found {found}")]
    TooFewFields {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: empty {field}")]
    EmptyField { line: usize, field: &'static str },
    #[error("line {line}: no gold substitutions")]
    MissingGold { line: usize },
    #[error("instance {index}: candidate {candidate:?} contains a tab or newline")]
    InvalidCandidate { index: usize, candidate: String },
    #[error("instance {index}: {count} candidates exceed the limit of {MAX_CANDIDATES}")]
    TooManyCandidates { index: usize, count: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown language code {0:?} (expected en, es or pt)")]
pub struct UnknownLanguage(pub String);

/// Task language. Each language has its own prompt wording and multi-word limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Language {
    English,
    Spanish,
    Portuguese,
}

impl Language {
    pub const ALL: [Language; 3] = [Language::English, Language::Spanish, Language::Portuguese];

    pub fn code(self) -> &'static str {
        match self {
            Language::English => "en",
            Language::Spanish => "es",
            Language::Portuguese => "pt",
        }
    }

    /// English name of the language, as inserted into adapted prompts.
    pub fn name(self) -> &'static str {
        match self {
            Language::English => "English",
            Language::Spanish => "Spanish",
            Language::Portuguese => "Portuguese",
        }
    }
}

impl FromStr for Language {
    type Err = UnknownLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "en" | "english" => Ok(Language::English),
            "es" | "spanish" => Ok(Language::Spanish),
            "pt" | "portuguese" => Ok(Language::Portuguese),
            _ => Err(UnknownLanguage(s.to_string())),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One task item: a context sentence with its pre-identified complex word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub index: usize,
    pub context_sentence: String,
    pub complex_word: String,
}

impl Instance {
    pub fn new(index: usize, context_sentence: impl Into<String>, complex_word: impl Into<String>) -> Self {
        Instance {
            index,
            context_sentence: context_sentence.into(),
            complex_word: complex_word.into(),
        }
    }

    /// Alignment key used when pairing gold and prediction files.
    pub fn key(&self) -> (&str, &str) {
        (&self.context_sentence, &self.complex_word)
    }

    /// Whether the complex word occurs in the sentence, ignoring case.
    pub fn word_in_context(&self) -> bool {
        self.context_sentence
            .to_lowercase()
            .contains(&self.complex_word.to_lowercase())
    }
}

/// Annotator substitutions for one instance, with frequencies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldLabelSet {
    labels: BTreeMap<String, u32>,
}

impl GoldLabelSet {
    /// Builds a set from raw annotations; repeats accumulate frequency.
    /// Labels are trimmed and lowercased, blanks are skipped.
    pub fn from_annotations<I, S>(annotations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut labels = BTreeMap::new();
        for label in annotations {
            let label = normalize_label(label.as_ref());
            if !label.is_empty() {
                *labels.entry(label).or_insert(0) += 1;
            }
        }
        GoldLabelSet { labels }
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn frequency(&self, label: &str) -> u32 {
        self.labels.get(label).copied().unwrap_or(0)
    }

    /// Label → frequency, in lexicographic label order.
    pub fn labels(&self) -> &BTreeMap<String, u32> {
        &self.labels
    }

    pub fn total_frequency(&self) -> u32 {
        self.labels.values().sum()
    }

    pub fn distinct_set(&self) -> BTreeSet<&str> {
        self.labels.keys().map(String::as_str).collect()
    }

    /// Labels sharing the maximum frequency. Ties are all included.
    pub fn top1_set(&self) -> BTreeSet<&str> {
        let max = self.labels.values().copied().max().unwrap_or(0);
        self.labels
            .iter()
            .filter(|(_, &freq)| freq == max)
            .map(|(label, _)| label.as_str())
            .collect()
    }
}

fn normalize_label(label: &str) -> String {
    label.trim().to_lowercase()
}

/// Ordered, deduplicated suggestions for one instance (at most ten).
///
/// Produced by the filter chain or the ensemble. Items are non-empty,
/// trimmed, and free of tabs and newlines.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CandidateList {
    items: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CandidateListError {
    #[error("duplicate candidate {0:?}")]
    Duplicate(String),
    #[error("{0} candidates exceed the limit of {MAX_CANDIDATES}")]
    TooMany(usize),
    #[error("candidate {0:?} is empty, untrimmed or contains a tab or newline")]
    Malformed(String),
}

impl CandidateList {
    pub fn empty() -> Self {
        CandidateList::default()
    }

    /// Validates and wraps an ordered list.
    pub fn new(items: Vec<String>) -> Result<Self, CandidateListError> {
        if items.len() > MAX_CANDIDATES {
            return Err(CandidateListError::TooMany(items.len()));
        }
        let mut seen = BTreeSet::new();
        for item in &items {
            if item.is_empty() || item.trim() != item || item.contains(['\t', '\n', '\r']) {
                return Err(CandidateListError::Malformed(item.clone()));
            }
            if !seen.insert(item.as_str()) {
                return Err(CandidateListError::Duplicate(item.clone()));
            }
        }
        Ok(CandidateList { items })
    }

    /// Caller guarantees the invariants (used by the filter and the ensemble).
    pub(crate) fn from_checked(items: Vec<String>) -> Self {
        debug_assert!(CandidateList::new(items.clone()).is_ok(), "{items:?}");
        CandidateList { items }
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// 1-based rank of `candidate`, if present.
    pub fn rank_of(&self, candidate: &str) -> Option<usize> {
        self.items.iter().position(|c| c == candidate).map(|i| i + 1)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.items.iter()
    }

    pub fn into_vec(self) -> Vec<String> {
        self.items
    }
}

impl<'a> IntoIterator for &'a CandidateList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// A gold-annotated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldInstance {
    pub instance: Instance,
    pub gold: GoldLabelSet,
}

/// A submission line read back from disk: the instance and its predictions
/// exactly as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub instance: Instance,
    pub candidates: Vec<String>,
}

fn read_lines(path: &Path) -> Result<String, DatasetError> {
    fs::read_to_string(path).map_err(|source| DatasetError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Splits a file into (1-based line number, fields), skipping blank lines.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

fn instance_from_fields(index: usize, line: usize, fields: &[&str]) -> Result<Instance, DatasetError> {
    if fields.len() < 2 {
        return Err(DatasetError::TooFewFields {
            line,
            expected: 2,
            found: fields.len(),
        });
    }
    let sentence = fields[0].trim();
    let word = fields[1].trim();
    if sentence.is_empty() {
        return Err(DatasetError::EmptyField {
            line,
            field: "sentence",
        });
    }
    if word.is_empty() {
        return Err(DatasetError::EmptyField {
            line,
            field: "complex word",
        });
    }
    let instance = Instance::new(index, sentence, word);
    if !instance.word_in_context() {
        log::warn!(
            "line {line}: complex word {:?} does not occur in its sentence",
            instance.complex_word
        );
    }
    Ok(instance)
}

/// Loads an unlabeled dataset. Extra columns are ignored.
pub fn load_instances(path: &Path) -> Result<Vec<Instance>, DatasetError> {
    parse_instances(&read_lines(path)?)
}

pub fn parse_instances(text: &str) -> Result<Vec<Instance>, DatasetError> {
    records(text)
        .enumerate()
        .map(|(index, (line, fields))| instance_from_fields(index, line, &fields))
        .collect()
}

/// Loads a gold-annotated dataset; every line needs at least one substitution.
pub fn load_gold(path: &Path) -> Result<Vec<GoldInstance>, DatasetError> {
    parse_gold(&read_lines(path)?)
}

pub fn parse_gold(text: &str) -> Result<Vec<GoldInstance>, DatasetError> {
    records(text)
        .enumerate()
        .map(|(index, (line, fields))| {
            let instance = instance_from_fields(index, line, &fields)?;
            let gold = GoldLabelSet::from_annotations(&fields[2..]);
            if gold.is_empty() {
                return Err(DatasetError::MissingGold { line });
            }
            Ok(GoldInstance { instance, gold })
        })
        .collect()
}

/// Loads a submission file. Predictions are trimmed; empty columns dropped.
pub fn load_submission(path: &Path) -> Result<Vec<Prediction>, DatasetError> {
    parse_submission(&read_lines(path)?)
}

pub fn parse_submission(text: &str) -> Result<Vec<Prediction>, DatasetError> {
    records(text)
        .enumerate()
        .map(|(index, (line, fields))| {
            let instance = instance_from_fields(index, line, &fields)?;
            let candidates = fields[2..]
                .iter()
                .map(|c| c.trim())
                .filter(|c| !c.is_empty())
                .map(str::to_string)
                .collect();
            Ok(Prediction {
                instance,
                candidates,
            })
        })
        .collect()
}

/// Renders submission rows. Output is a pure function of the rows.
pub fn format_submission(rows: &[(Instance, CandidateList)]) -> Result<String, DatasetError> {
    let mut out = String::new();
    for (instance, candidates) in rows {
        if candidates.len() > MAX_CANDIDATES {
            return Err(DatasetError::TooManyCandidates {
                index: instance.index,
                count: candidates.len(),
            });
        }
        out.push_str(&instance.context_sentence);
        out.push('\t');
        out.push_str(&instance.complex_word);
        for candidate in candidates {
            if candidate.contains(['\t', '\n', '\r']) {
                return Err(DatasetError::InvalidCandidate {
                    index: instance.index,
                    candidate: candidate.clone(),
                });
            }
            out.push('\t');
            out.push_str(candidate);
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_submission(path: &Path, rows: &[(Instance, CandidateList)]) -> Result<(), DatasetError> {
    let text = format_submission(rows)?;
    let write_err = |source| DatasetError::Write {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(write_err)?;
    let mut writer = BufWriter::new(file);
    writer.write_all(text.as_bytes()).map_err(write_err)?;
    writer.flush().map_err(write_err)
}
