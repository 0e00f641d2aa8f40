//! End-to-end runs: render, complete, parse, filter, and (for ensembles) fuse.
//!
//! Requests may complete in any order; results are always reassembled by
//! instance position and prompt position. A failed request never aborts a
//! run. In single mode the instance gets an empty list, in ensemble mode the
//! prompt contributes an empty ranking.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;
use std::thread;

use thiserror::Error;

use crate::backend::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse};
use crate::cost::{prompts_for_mode, usage_cost, CostError, CostReport, PricingModel, RunMode};
use crate::ensemble::{combine, PromptRanking, ScoreParams};
use crate::model::{CandidateList, Instance, Language};
use crate::postprocess::extract_candidates;
use crate::prompts::{render, PromptError, PromptId, PromptSpec};

pub const DEFAULT_MAX_IN_FLIGHT: usize = 4;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Selection(#[from] CostError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    pub language: Language,
    pub params: ScoreParams,
    pub max_in_flight: usize,
}

impl RunConfig {
    pub fn new(mode: RunMode, language: Language) -> Self {
        RunConfig {
            mode,
            language,
            params: ScoreParams::default(),
            max_in_flight: DEFAULT_MAX_IN_FLIGHT,
        }
    }
}

/// One request of a run and how it ended.
#[derive(Debug)]
pub struct Exchange {
    pub instance_index: usize,
    pub prompt_id: PromptId,
    pub prompt: String,
    pub outcome: Result<CompletionResponse, BackendError>,
}

#[derive(Debug)]
pub struct RunOutput {
    pub mode: RunMode,
    pub rows: Vec<(Instance, CandidateList)>,
    /// Ordered by instance, then prompt.
    pub exchanges: Vec<Exchange>,
}

impl RunOutput {
    pub fn empty_outputs(&self) -> usize {
        self.rows.iter().filter(|(_, c)| c.is_empty()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = (&Exchange, &BackendError)> {
        self.exchanges
            .iter()
            .filter_map(|e| e.outcome.as_ref().err().map(|err| (e, err)))
    }

    /// Cost of the successful requests.
    pub fn cost(&self, pricing: PricingModel) -> CostReport {
        let ok = self
            .exchanges
            .iter()
            .filter_map(|e| e.outcome.as_ref().ok().map(|r| (e.prompt.as_str(), r)));
        usage_cost(self.mode, self.rows.len(), ok, pricing)
    }
}

struct Job<'a> {
    instance: &'a Instance,
    spec: &'a PromptSpec,
    prompt: String,
}

/// Issues all requests with at most `max_in_flight` outstanding.
fn complete_all(
    jobs: &[Job<'_>],
    backend: &dyn CompletionBackend,
    max_in_flight: usize,
) -> Vec<Result<CompletionResponse, BackendError>> {
    let slots: Vec<OnceLock<Result<CompletionResponse, BackendError>>> =
        jobs.iter().map(|_| OnceLock::new()).collect();
    let next = AtomicUsize::new(0);
    let workers = max_in_flight.max(1).min(jobs.len());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let request = CompletionRequest::new(job.prompt.clone(), job.spec.temperature);
                let outcome = backend.complete(&request);
                if let Err(err) = &outcome {
                    log::warn!(
                        "instance {} prompt {}: {err}",
                        job.instance.index,
                        job.spec.id
                    );
                }
                slots[i].set(outcome).expect("each job completes once");
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("all jobs completed"))
        .collect()
}

fn run_with(
    instances: &[Instance],
    prompts: &[PromptSpec],
    backend: &dyn CompletionBackend,
    config: &RunConfig,
    mode: RunMode,
) -> Result<RunOutput, PipelineError> {
    let selected = prompts_for_mode(prompts, mode)?;
    let mut jobs = Vec::with_capacity(instances.len() * selected.len());
    for instance in instances {
        for &spec in &selected {
            jobs.push(Job {
                instance,
                spec,
                prompt: render(spec, instance)?,
            });
        }
    }
    let outcomes = complete_all(&jobs, backend, config.max_in_flight);

    let per_instance = selected.len();
    let mut rows = Vec::with_capacity(instances.len());
    let mut exchanges = Vec::with_capacity(jobs.len());
    let mut outcomes = outcomes.into_iter();
    for (instance, chunk) in instances.iter().zip(jobs.chunks(per_instance)) {
        let rankings: Vec<PromptRanking> = chunk
            .iter()
            .map(|job| {
                let outcome = outcomes.next().expect("one outcome per job");
                let candidates = match &outcome {
                    Ok(response) => extract_candidates(&response.text, &instance.complex_word, config.language),
                    Err(_) => CandidateList::empty(),
                };
                exchanges.push(Exchange {
                    instance_index: instance.index,
                    prompt_id: job.spec.id,
                    prompt: job.prompt.clone(),
                    outcome,
                });
                PromptRanking::new(job.spec.id, candidates)
            })
            .collect();
        let candidates = match mode {
            RunMode::Single => rankings.into_iter().next().map(|r| r.candidates).unwrap_or_default(),
            RunMode::Ensemble => combine(&rankings, config.params),
        };
        rows.push((instance.clone(), candidates));
    }
    Ok(RunOutput {
        mode,
        rows,
        exchanges,
    })
}

/// The single conservative zero-shot context prompt per instance.
pub fn run_single(
    instances: &[Instance],
    prompts: &[PromptSpec],
    backend: &dyn CompletionBackend,
    config: &RunConfig,
) -> Result<RunOutput, PipelineError> {
    run_with(instances, prompts, backend, config, RunMode::Single)
}

/// Every prompt per instance, fused with the configured score parameters.
pub fn run_ensemble(
    instances: &[Instance],
    prompts: &[PromptSpec],
    backend: &dyn CompletionBackend,
    config: &RunConfig,
) -> Result<RunOutput, PipelineError> {
    run_with(instances, prompts, backend, config, RunMode::Ensemble)
}

/// Dispatches on `config.mode`.
pub fn run(
    instances: &[Instance],
    prompts: &[PromptSpec],
    backend: &dyn CompletionBackend,
    config: &RunConfig,
) -> Result<RunOutput, PipelineError> {
    run_with(instances, prompts, backend, config, config.mode)
}
