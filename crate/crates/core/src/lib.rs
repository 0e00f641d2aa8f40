//! Prompt-based lexical simplification.
//!
//! Given a sentence and a complex word in it, ask a completion model for
//! simpler substitutes, parse and clean the free-form answer, and optionally
//! fuse the answers of several prompts into one ranking. The crate also reads
//! and writes shared-task style datasets, scores submissions with the
//! standard metrics, and estimates what a run costs.
//!
//! ```
//! use lexsimp::backend::MockBackend;
//! use lexsimp::cost::RunMode;
//! use lexsimp::model::{Instance, Language};
//! use lexsimp::pipeline::{run, RunConfig};
//! use lexsimp::prompts::default_prompt_set;
//!
//! let prompts = default_prompt_set(Language::English, None).unwrap();
//! let instances = [Instance::new(0, "Attendance is compulsory.", "compulsory")];
//! let config = RunConfig::new(RunMode::Ensemble, Language::English);
//! let output = run(&instances, &prompts, &MockBackend::new(), &config).unwrap();
//! assert_eq!(output.rows[0].1.len(), 10);
//! ```
//!
//! The guide in `book/` walks through each stage; its code samples are
//! compiled and run as doctests.

pub mod backend;
pub mod cli;
pub mod cost;
pub mod ensemble;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod postprocess;
pub mod prompts;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
    #[doc = include_str!("../../../book/src/prompts.md")]
    mod prompts {}
    #[doc = include_str!("../../../book/src/parsing-and-filtering.md")]
    mod parsing_and_filtering {}
    #[doc = include_str!("../../../book/src/ensemble.md")]
    mod ensemble {}
    #[doc = include_str!("../../../book/src/backends.md")]
    mod backends {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/cost.md")]
    mod cost {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
