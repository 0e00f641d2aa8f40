//! Token and price accounting for runs.
//!
//! Without provider usage data, token counts are approximated as one token
//! per four characters. Reported usage replaces the approximation one
//! request at a time.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::backend::CompletionResponse;
use crate::model::Instance;
use crate::prompts::{render, PromptError, PromptId, PromptSpec};

/// Expected completion length per request when estimating ahead of a run.
pub const DEFAULT_COMPLETION_ALLOWANCE: u64 = 100;

#[derive(Debug, Error)]
pub enum CostError {
    #[error("prompt set is empty")]
    EmptyPromptSet,
    #[error("single mode needs the {0} prompt")]
    MissingSinglePrompt(PromptId),
    #[error("price must be a finite non-negative number, got {0}")]
    InvalidPrice(f64),
    #[error(transparent)]
    Prompt(#[from] PromptError),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown mode {0:?} (expected single or ensemble)")]
pub struct UnknownMode(pub String);

/// Which prompts a run issues per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    /// The conservative zero-shot context prompt only.
    Single,
    /// Every prompt in the set, fused.
    Ensemble,
}

impl FromStr for RunMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(RunMode::Single),
            "ensemble" => Ok(RunMode::Ensemble),
            other => Err(UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunMode::Single => "single",
            RunMode::Ensemble => "ensemble",
        })
    }
}

/// Selects the prompts `mode` issues from a full set.
pub fn prompts_for_mode(prompts: &[PromptSpec], mode: RunMode) -> Result<Vec<&PromptSpec>, CostError> {
    if prompts.is_empty() {
        return Err(CostError::EmptyPromptSet);
    }
    match mode {
        RunMode::Ensemble => Ok(prompts.iter().collect()),
        RunMode::Single => prompts
            .iter()
            .find(|p| p.id == PromptId::ZeroShotContextConservative)
            .map(|p| vec![p])
            .ok_or(CostError::MissingSinglePrompt(PromptId::ZeroShotContextConservative)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PricingModel {
    pub price_per_1k_tokens: f64,
}

impl Default for PricingModel {
    fn default() -> Self {
        PricingModel {
            price_per_1k_tokens: 0.02,
        }
    }
}

impl PricingModel {
    pub fn new(price_per_1k_tokens: f64) -> Result<Self, CostError> {
        if price_per_1k_tokens.is_finite() && price_per_1k_tokens >= 0.0 {
            Ok(PricingModel { price_per_1k_tokens })
        } else {
            Err(CostError::InvalidPrice(price_per_1k_tokens))
        }
    }

    /// Price of `tokens`, rounded to four decimals.
    pub fn cost(&self, tokens: u64) -> f64 {
        round4(tokens as f64 / 1000.0 * self.price_per_1k_tokens)
    }
}

fn round4(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub mode: RunMode,
    pub n_instances: usize,
    pub n_requests: usize,
    pub total_tokens: u64,
    pub total_cost: f64,
    pub per_instance_tokens: f64,
}

impl CostReport {
    fn new(mode: RunMode, n_instances: usize, n_requests: usize, total_tokens: u64, pricing: PricingModel) -> Self {
        CostReport {
            mode,
            n_instances,
            n_requests,
            total_tokens,
            total_cost: pricing.cost(total_tokens),
            per_instance_tokens: if n_instances == 0 {
                0.0
            } else {
                total_tokens as f64 / n_instances as f64
            },
        }
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} instances={} requests={} tokens={} tokens/instance={:.1} cost=${:.2}",
            self.mode,
            self.n_instances,
            self.n_requests,
            self.total_tokens,
            self.per_instance_tokens,
            self.total_cost
        )
    }
}

/// `ceil(chars / 4)`.
pub fn estimate_tokens(text: &str) -> u64 {
    (text.chars().count() as u64).div_ceil(4)
}

/// Tokens for one finished request: reported usage when present, otherwise
/// the estimate of prompt plus completion text.
pub fn request_tokens(prompt: &str, response: &CompletionResponse) -> u64 {
    response
        .reported_tokens()
        .unwrap_or_else(|| estimate_tokens(prompt) + estimate_tokens(&response.text))
}

/// Estimates a run before issuing it: rendered prompt tokens plus a fixed
/// completion allowance per request.
pub fn estimate_run_cost(
    instances: &[Instance],
    prompts: &[PromptSpec],
    mode: RunMode,
    pricing: PricingModel,
    completion_allowance: u64,
) -> Result<CostReport, CostError> {
    let selected = prompts_for_mode(prompts, mode)?;
    let mut total = 0u64;
    for instance in instances {
        for spec in &selected {
            total += estimate_tokens(&render(spec, instance)?) + completion_allowance;
        }
    }
    Ok(CostReport::new(
        mode,
        instances.len(),
        instances.len() * selected.len(),
        total,
        pricing,
    ))
}

/// Cost of a finished run from its (prompt, response) pairs.
pub fn usage_cost<'a, I>(mode: RunMode, n_instances: usize, exchanges: I, pricing: PricingModel) -> CostReport
where
    I: IntoIterator<Item = (&'a str, &'a CompletionResponse)>,
{
    let mut requests = 0;
    let mut total = 0;
    for (prompt, response) in exchanges {
        requests += 1;
        total += request_tokens(prompt, response);
    }
    CostReport::new(mode, n_instances, requests, total, pricing)
}
