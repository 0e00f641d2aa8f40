//! Fusing per-prompt rankings into one list.
//!
//! Each prompt contributes `max(offset - slope * rank, 0)` to every suggestion
//! it ranks (ranks start at 1); a suggestion a prompt did not produce gets
//! nothing from that prompt. Suggestions are ordered by their summed score.
//! With the default offset 5.5 and slope 0.5, rank 1 is worth 5 and rank 11
//! or worse is worth 0.
//!
//! Equal scores are ordered by how many prompts produced the suggestion
//! (more first), then by its best rank (lower first), then alphabetically.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::model::{CandidateList, MAX_CANDIDATES};
use crate::prompts::PromptId;

/// Scores closer than this fraction of the offset count as tied, so that
/// rescaling both parameters cannot reorder suggestions through rounding.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum EnsembleError {
    #[error("ranks start at 1, got {0}")]
    InvalidRank(usize),
    #[error("score parameters must be positive and finite (offset {offset}, slope {slope})")]
    InvalidParams { offset: f64, slope: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreParams {
    pub offset: f64,
    pub slope: f64,
}

impl Default for ScoreParams {
    fn default() -> Self {
        ScoreParams {
            offset: 5.5,
            slope: 0.5,
        }
    }
}

impl ScoreParams {
    pub fn new(offset: f64, slope: f64) -> Result<Self, EnsembleError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(offset) && ok(slope) {
            Ok(ScoreParams { offset, slope })
        } else {
            Err(EnsembleError::InvalidParams { offset, slope })
        }
    }

    /// Both parameters multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Result<Self, EnsembleError> {
        Self::new(self.offset * factor, self.slope * factor)
    }
}

/// One prompt's filtered suggestions; position i has rank i + 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptRanking {
    pub prompt_id: PromptId,
    pub candidates: CandidateList,
}

impl PromptRanking {
    pub fn new(prompt_id: PromptId, candidates: CandidateList) -> Self {
        PromptRanking {
            prompt_id,
            candidates,
        }
    }
}

/// Score a prompt gives to a suggestion at `rank`; `None` means the prompt
/// did not produce it.
pub fn contribution(rank: Option<usize>, params: ScoreParams) -> Result<f64, EnsembleError> {
    match rank {
        None => Ok(0.0),
        Some(0) => Err(EnsembleError::InvalidRank(0)),
        Some(rank) => Ok((params.offset - params.slope * rank as f64).max(0.0)),
    }
}

/// A fused suggestion with the statistics used to order it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredCandidate {
    pub text: String,
    pub score: f64,
    /// Number of rankings containing the suggestion.
    pub support: usize,
    pub best_rank: usize,
}

/// Every distinct suggestion across `rankings` with its summed score, best
/// first. Scores accumulate in ranking order.
pub fn score_all(rankings: &[PromptRanking], params: ScoreParams) -> Vec<ScoredCandidate> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut scored: Vec<ScoredCandidate> = Vec::new();
    for ranking in rankings {
        for (pos, text) in ranking.candidates.iter().enumerate() {
            let rank = pos + 1;
            let points = contribution(Some(rank), params).expect("rank >= 1");
            let slot = *index.entry(text.as_str()).or_insert_with(|| {
                scored.push(ScoredCandidate {
                    text: text.clone(),
                    score: 0.0,
                    support: 0,
                    best_rank: rank,
                });
                scored.len() - 1
            });
            let entry = &mut scored[slot];
            entry.score += points;
            entry.support += 1;
            entry.best_rank = entry.best_rank.min(rank);
        }
    }
    let tolerance = TIE_TOLERANCE * params.offset;
    scored.sort_by(|a, b| compare(a, b, tolerance));
    scored
}

fn compare(a: &ScoredCandidate, b: &ScoredCandidate, tolerance: f64) -> Ordering {
    let by_score = if (a.score - b.score).abs() <= tolerance {
        Ordering::Equal
    } else {
        b.score.total_cmp(&a.score)
    };
    by_score
        .then(b.support.cmp(&a.support))
        .then(a.best_rank.cmp(&b.best_rank))
        .then_with(|| a.text.cmp(&b.text))
}

/// The top ten fused suggestions. Suggestions scoring zero still fill the
/// tail after every positively scored one.
pub fn combine(rankings: &[PromptRanking], params: ScoreParams) -> CandidateList {
    let items = score_all(rankings, params)
        .into_iter()
        .take(MAX_CANDIDATES)
        .map(|c| c.text)
        .collect();
    CandidateList::from_checked(items)
}
