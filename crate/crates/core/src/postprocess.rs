//! Turning free-form completions into candidate lists.
//!
//! [`parse_suggestions`] splits raw text into items; [`filter_candidates`]
//! normalizes them and drops the ones that cannot be valid substitutes.

use std::collections::HashSet;
use std::sync::LazyLock;

use regex::Regex;

use crate::model::{CandidateList, Language, MAX_CANDIDATES};

static ENUMERATION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*\d+[.)]\s*").expect("valid regex"));
static BULLET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*[-*]\s+").expect("valid regex"));

const QUOTES: &[char] = &['"', '\'', '\u{201c}', '\u{201d}', '\u{2018}', '\u{2019}'];

/// Characters trimmed from both ends of every suggestion. Tab and carriage
/// return are included so no suggestion can break the submission format.
pub const TRIM_CHARS: &[char] = &['\n', ' ', ':', ';', '.', '?', '!', '\t', '\r'];

/// Suggestions as parsed, before normalization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCandidates {
    pub items: Vec<String>,
}

impl RawCandidates {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for RawCandidates {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        RawCandidates {
            items: iter.into_iter().map(Into::into).collect(),
        }
    }
}

fn strip_quotes(item: &str) -> &str {
    item.trim().trim_matches(QUOTES).trim()
}

/// Splits a completion into suggestions.
///
/// Numbered (`1.`, `2)`) and bulleted (`-`, `*`) lines are one suggestion
/// each. A lone unnumbered line holding `,` or `;` is split on those
/// separators instead. Never fails: unusable text gives an empty list.
pub fn parse_suggestions(raw: &str) -> RawCandidates {
    let lines: Vec<&str> = raw
        .split(['\n', '\r'])
        .filter(|l| !l.trim().is_empty())
        .collect();

    if let [line] = lines.as_slice() {
        let enumerated = ENUMERATION.is_match(line) || BULLET.is_match(line);
        if !enumerated && line.contains([',', ';']) {
            return line
                .split([',', ';'])
                .map(strip_quotes)
                .filter(|s| !s.is_empty())
                .collect();
        }
    }

    lines
        .into_iter()
        .map(|line| {
            let line = match ENUMERATION.find(line) {
                Some(m) => &line[m.end()..],
                None => match BULLET.find(line) {
                    Some(m) => &line[m.end()..],
                    None => line,
                },
            };
            strip_quotes(line)
        })
        .filter(|s| !s.is_empty())
        .collect()
}

/// Largest accepted word count for a suggestion in `language`.
pub fn max_words(language: Language) -> usize {
    match language {
        Language::English => 2,
        Language::Spanish | Language::Portuguese => 3,
    }
}

/// Trim, lowercase and collapse interior whitespace.
fn normalize_surface(item: &str) -> String {
    item.trim_matches(TRIM_CHARS)
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Normalizes one suggestion; repeats until nothing changes so that
/// stripping "to " cannot expose new trimmable characters.
fn normalize(item: &str, language: Language) -> String {
    let mut current = normalize_surface(item);
    loop {
        let mut next = normalize_surface(&current);
        if language == Language::English {
            if let Some(rest) = next.strip_prefix("to ") {
                if !rest.trim().is_empty() {
                    next = normalize_surface(rest);
                }
            }
        }
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Normalizes the parsed suggestions and keeps the usable ones, in order.
///
/// Steps: trim punctuation and whitespace from both ends, lowercase, strip a
/// leading "to " (English only), drop the complex word itself, drop items
/// with too many words, deduplicate, keep the first ten.
pub fn filter_candidates(raw: &RawCandidates, complex_word: &str, language: Language) -> CandidateList {
    let source = normalize_surface(complex_word);
    let limit = max_words(language);
    let mut seen = HashSet::new();
    let items = raw
        .items
        .iter()
        .map(|item| normalize(item, language))
        .filter(|item| !item.is_empty())
        .filter(|item| *item != source)
        .filter(|item| item.split_whitespace().count() <= limit)
        .filter(|item| seen.insert(item.clone()))
        .take(MAX_CANDIDATES)
        .collect();
    CandidateList::from_checked(items)
}

/// Convenience: parse then filter.
pub fn extract_candidates(raw: &str, complex_word: &str, language: Language) -> CandidateList {
    filter_candidates(&parse_suggestions(raw), complex_word, language)
}
