//! Shared-task evaluation metrics.
//!
//! Relevance is membership in the gold substitutions after trimming and
//! lowercasing; there is no stemming or lemmatization. All dataset scores are
//! plain means over every instance, so an instance with no predictions counts
//! as zero.
//!
//! | metric | per instance |
//! |--------|--------------|
//! | ACC@1 | top prediction is a gold label |
//! | ACC@k@Top1 | one of the first k predictions is a most-frequent gold label |
//! | MAP@k | average precision of the first k predictions |
//! | Potential@k | one of the first k predictions is a gold label |

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::model::{load_gold, load_submission, DatasetError, GoldInstance, GoldLabelSet, Prediction};

/// Identifies the matching rule in reports.
pub const MATCHING_RULE: &str = "exact-normalized-v1";

pub const ACC_TOP1_KS: [usize; 3] = [1, 2, 3];
pub const MAP_KS: [usize; 3] = [3, 5, 10];
pub const POTENTIAL_KS: [usize; 3] = [3, 5, 10];

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("instance {0} has no gold labels")]
    EmptyGold(usize),
    #[error("k must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("gold has {gold} instances, predictions have {pred}")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("line {line}: gold instance {gold:?} does not match prediction {pred:?}")]
    Misaligned {
        line: usize,
        gold: (String, String),
        pred: (String, String),
    },
    #[error("line {line}: duplicate instance {key:?}")]
    DuplicateInstance { line: usize, key: (String, String) },
}

/// Denominator used by average precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapNormalization {
    /// `min(k, number of distinct gold labels)`
    #[default]
    MinKGold,
    /// plain `k`
    K,
}

impl MapNormalization {
    pub fn denominator(self, k: usize, distinct_gold: usize) -> usize {
        match self {
            MapNormalization::MinKGold => k.min(distinct_gold),
            MapNormalization::K => k,
        }
    }
}

fn normalize(text: &str) -> String {
    text.trim().to_lowercase()
}

/// Trimmed, case-folded equality.
pub fn matches(pred: &str, gold_label: &str) -> bool {
    normalize(pred) == normalize(gold_label)
}

fn check(gold: &GoldLabelSet, k: usize) -> Result<(), MetricError> {
    if gold.is_empty() {
        return Err(MetricError::EmptyGold(0));
    }
    if k == 0 {
        return Err(MetricError::ZeroK);
    }
    Ok(())
}

fn any_hit_in(preds: &[String], k: usize, targets: &BTreeSet<&str>) -> bool {
    preds
        .iter()
        .take(k)
        .any(|p| targets.contains(normalize(p).as_str()))
}

/// 1 when one of the first `k` predictions is a gold label.
pub fn potential_at_k(preds: &[String], gold: &GoldLabelSet, k: usize) -> Result<f64, MetricError> {
    check(gold, k)?;
    Ok(any_hit_in(preds, k, &gold.distinct_set()) as u8 as f64)
}

pub fn acc_at_1(preds: &[String], gold: &GoldLabelSet) -> Result<f64, MetricError> {
    potential_at_k(preds, gold, 1)
}

/// 1 when one of the first `k` predictions is among the most frequent gold
/// labels (all of them, when tied).
pub fn acc_at_k_top1(preds: &[String], gold: &GoldLabelSet, k: usize) -> Result<f64, MetricError> {
    check(gold, k)?;
    Ok(any_hit_in(preds, k, &gold.top1_set()) as u8 as f64)
}

/// Average precision over the first `k` predictions.
///
/// A prediction repeating an earlier one is not counted as relevant again.
pub fn map_at_k(
    preds: &[String],
    gold: &GoldLabelSet,
    k: usize,
    normalization: MapNormalization,
) -> Result<f64, MetricError> {
    check(gold, k)?;
    let distinct = gold.distinct_set();
    let mut credited = HashSet::new();
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, pred) in preds.iter().take(k).enumerate() {
        let pred = normalize(pred);
        if distinct.contains(pred.as_str()) && credited.insert(pred) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    Ok(sum / normalization.denominator(k, distinct.len()) as f64)
}

/// Dataset-level scores with the grid of cutoffs used in the result tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub n_instances: usize,
    pub acc_at_1: f64,
    pub acc_at_k_top1: BTreeMap<usize, f64>,
    pub map_at_k: BTreeMap<usize, f64>,
    pub potential_at_k: BTreeMap<usize, f64>,
    pub matching_rule: &'static str,
    pub map_normalization: MapNormalization,
}

/// Scores predictions against gold, pairing them by position.
pub fn evaluate_pairs<'a, I>(pairs: I, normalization: MapNormalization) -> Result<EvaluationReport, MetricError>
where
    I: IntoIterator<Item = (&'a [String], &'a GoldLabelSet)>,
{
    let mut n = 0usize;
    let mut acc1 = 0.0;
    let mut top1: BTreeMap<usize, f64> = ACC_TOP1_KS.iter().map(|&k| (k, 0.0)).collect();
    let mut map: BTreeMap<usize, f64> = MAP_KS.iter().map(|&k| (k, 0.0)).collect();
    let mut potential: BTreeMap<usize, f64> = POTENTIAL_KS.iter().map(|&k| (k, 0.0)).collect();

    for (index, (preds, gold)) in pairs.into_iter().enumerate() {
        if gold.is_empty() {
            return Err(MetricError::EmptyGold(index));
        }
        n += 1;
        acc1 += acc_at_1(preds, gold)?;
        for (&k, total) in top1.iter_mut() {
            *total += acc_at_k_top1(preds, gold, k)?;
        }
        for (&k, total) in map.iter_mut() {
            *total += map_at_k(preds, gold, k, normalization)?;
        }
        for (&k, total) in potential.iter_mut() {
            *total += potential_at_k(preds, gold, k)?;
        }
    }

    let mean = |total: f64| if n == 0 { 0.0 } else { total / n as f64 };
    let means = |m: BTreeMap<usize, f64>| m.into_iter().map(|(k, v)| (k, mean(v))).collect();
    Ok(EvaluationReport {
        n_instances: n,
        acc_at_1: mean(acc1),
        acc_at_k_top1: means(top1),
        map_at_k: means(map),
        potential_at_k: means(potential),
        matching_rule: MATCHING_RULE,
        map_normalization: normalization,
    })
}

/// Pairs gold and predictions line by line, checking instance keys agree.
pub fn align<'a>(
    gold: &'a [GoldInstance],
    preds: &'a [Prediction],
) -> Result<Vec<(&'a [String], &'a GoldLabelSet)>, MetricError> {
    let key = |s: &str, w: &str| (s.to_string(), w.to_string());
    let mut seen = HashSet::new();
    for g in gold {
        if !seen.insert(g.instance.key()) {
            let (s, w) = g.instance.key();
            return Err(MetricError::DuplicateInstance {
                line: g.instance.index + 1,
                key: key(s, w),
            });
        }
    }
    for (g, p) in gold.iter().zip(preds) {
        if g.instance.key() != p.instance.key() {
            let (gs, gw) = g.instance.key();
            let (ps, pw) = p.instance.key();
            return Err(MetricError::Misaligned {
                line: g.instance.index + 1,
                gold: key(gs, gw),
                pred: key(ps, pw),
            });
        }
    }
    if gold.len() != preds.len() {
        return Err(MetricError::LengthMismatch {
            gold: gold.len(),
            pred: preds.len(),
        });
    }
    Ok(gold
        .iter()
        .zip(preds)
        .map(|(g, p)| (p.candidates.as_slice(), &g.gold))
        .collect())
}

pub fn evaluate(gold_path: &Path, pred_path: &Path) -> Result<EvaluationReport, MetricError> {
    evaluate_with(gold_path, pred_path, MapNormalization::default())
}

pub fn evaluate_with(
    gold_path: &Path,
    pred_path: &Path,
    normalization: MapNormalization,
) -> Result<EvaluationReport, MetricError> {
    let gold = load_gold(gold_path)?;
    let preds = load_submission(pred_path)?;
    evaluate_pairs(align(&gold, &preds)?, normalization)
}

impl EvaluationReport {
    /// `metric=value` lines, full precision.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n_instances={}", self.n_instances).unwrap();
        writeln!(out, "matching_rule={}", self.matching_rule).unwrap();
        let norm = match self.map_normalization {
            MapNormalization::MinKGold => "min-k-gold",
            MapNormalization::K => "k",
        };
        writeln!(out, "map_normalization={norm}").unwrap();
        writeln!(out, "acc@1={}", self.acc_at_1).unwrap();
        for (k, v) in &self.acc_at_k_top1 {
            writeln!(out, "acc@{k}@top1={v}").unwrap();
        }
        for (k, v) in &self.map_at_k {
            writeln!(out, "map@{k}={v}").unwrap();
        }
        for (k, v) in &self.potential_at_k {
            writeln!(out, "potential@{k}={v}").unwrap();
        }
        out
    }
}

impl fmt::Display for EvaluationReport {
    /// Table with four decimals, columns as in the shared-task result tables.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut header = vec!["ACC@1".to_string()];
        let mut values = vec![self.acc_at_1];
        for (k, v) in &self.acc_at_k_top1 {
            header.push(format!("ACC@{k}@Top1"));
            values.push(*v);
        }
        for (k, v) in &self.map_at_k {
            header.push(format!("MAP@{k}"));
            values.push(*v);
        }
        for (k, v) in &self.potential_at_k {
            header.push(format!("Potential@{k}"));
            values.push(*v);
        }
        let widths: Vec<usize> = header.iter().map(|h| h.len().max(6)).collect();
        let row = |cells: Vec<String>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        writeln!(f, "{}", row(header.clone()))?;
        writeln!(f, "{}", row(values.iter().map(|v| format!("{v:.4}")).collect()))?;
        writeln!(
            f,
            "n_instances={} matching_rule={}",
            self.n_instances, self.matching_rule
        )
    }
}
