//! Command-line interface.
//!
//! Exit codes: 0 success, 2 invalid flags or configuration, 3 dataset or
//! output file errors, 4 backend, fixture or authentication errors.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::backend::{ApiBackend, CompletionBackend, FixtureStore, MockBackend, RecordingBackend, ReplayBackend};
use crate::cost::{estimate_run_cost, PricingModel, RunMode, DEFAULT_COMPLETION_ALLOWANCE};
use crate::ensemble::ScoreParams;
use crate::metrics::{evaluate_with, MapNormalization, MetricError};
use crate::model::{format_submission, load_instances, DatasetError, Language};
use crate::pipeline::{run, RunConfig, RunOutput, DEFAULT_MAX_IN_FLIGHT};
use crate::prompts::{default_prompt_set, ExemplarSet, PromptSpec};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATASET: u8 = 3;
pub const EXIT_BACKEND: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "lexsimp", version, about = "Prompt-based lexical simplification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate substitutes for every instance of a dataset.
    Run(RunArgs),
    /// Score a submission against gold annotations.
    Eval(EvalArgs),
    /// Estimate tokens and price of a run without issuing it.
    Cost(CostArgs),
    /// Issue a run and save every response as replay fixtures.
    RecordFixtures(RecordArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LangArg {
    En,
    Es,
    Pt,
}

impl From<LangArg> for Language {
    fn from(value: LangArg) -> Self {
        match value {
            LangArg::En => Language::English,
            LangArg::Es => Language::Spanish,
            LangArg::Pt => Language::Portuguese,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Single,
    Ensemble,
}

impl From<ModeArg> for RunMode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Single => RunMode::Single,
            ModeArg::Ensemble => RunMode::Ensemble,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Api,
    Replay,
    Mock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Kv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapNormArg {
    MinKGold,
    K,
}

#[derive(Debug, Args)]
pub struct PromptArgs {
    /// Dataset file: sentence TAB complex word per line.
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum)]
    pub lang: LangArg,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Exemplar file for few-shot prompts (defaults to the bundled set).
    #[arg(long)]
    pub exemplars: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub prompts: PromptArgs,
    #[arg(long, value_enum)]
    pub backend: BackendArg,
    /// Fixture file to replay from (replay backend only).
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Save every response to this fixture file.
    #[arg(long)]
    pub record: Option<PathBuf>,
    /// Submission output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ensemble score parameters as OFFSET,SLOPE.
    #[arg(long, value_parser = parse_params)]
    pub params: Option<ScoreParams>,
    #[arg(long, default_value_t = DEFAULT_MAX_IN_FLIGHT)]
    pub max_in_flight: usize,
    /// Price per 1000 tokens for the cost summary.
    #[arg(long, default_value_t = 0.02)]
    pub price: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Gold file: sentence TAB complex word TAB substitutions...
    #[arg(long)]
    pub gold: PathBuf,
    /// Submission file: sentence TAB complex word TAB predictions...
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    /// Denominator of average precision.
    #[arg(long, value_enum, default_value = "min-k-gold")]
    pub map_normalization: MapNormArg,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[command(flatten)]
    pub prompts: PromptArgs,
    #[arg(long, default_value_t = 0.02)]
    pub price: f64,
    /// Expected completion tokens per request.
    #[arg(long, default_value_t = DEFAULT_COMPLETION_ALLOWANCE)]
    pub completion_allowance: u64,
}

#[derive(Debug, Args)]
pub struct RecordArgs {
    #[command(flatten)]
    pub prompts: PromptArgs,
    /// Where to write the fixtures.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "api")]
    pub backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_MAX_IN_FLIGHT)]
    pub max_in_flight: usize,
}

fn parse_params(text: &str) -> Result<ScoreParams, String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| "expected OFFSET,SLOPE".to_string())?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    ScoreParams::new(parse(a)?, parse(b)?).map_err(|e| e.to_string())
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn dataset(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_DATASET,
            message: message.to_string(),
        }
    }

    fn backend(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_BACKEND,
            message: message.to_string(),
        }
    }
}

fn load_prompts(args: &PromptArgs) -> Result<Vec<PromptSpec>, CliError> {
    let language = Language::from(args.lang);
    let exemplars = match &args.exemplars {
        Some(path) => ExemplarSet::load(language, path).map_err(CliError::usage)?,
        None => ExemplarSet::bundled(language),
    };
    default_prompt_set(language, Some(&exemplars)).map_err(CliError::usage)
}

fn make_backend(kind: BackendArg, fixtures: Option<&Path>) -> Result<Box<dyn CompletionBackend>, CliError> {
    Ok(match kind {
        BackendArg::Mock => Box::new(MockBackend::new()),
        BackendArg::Api => Box::new(ApiBackend::from_env().map_err(CliError::backend)?),
        BackendArg::Replay => {
            let path = fixtures.ok_or_else(|| CliError::usage("--backend replay requires --fixtures"))?;
            Box::new(ReplayBackend::from_path(path).map_err(CliError::backend)?)
        }
    })
}

fn execute_run(
    args: &PromptArgs,
    backend: &dyn CompletionBackend,
    params: ScoreParams,
    max_in_flight: usize,
) -> Result<RunOutput, CliError> {
    let prompts = load_prompts(args)?;
    let instances = load_instances(&args.dataset).map_err(CliError::dataset)?;
    let mut config = RunConfig::new(args.mode.into(), args.lang.into());
    config.params = params;
    config.max_in_flight = max_in_flight;
    run(&instances, &prompts, backend, &config).map_err(CliError::usage)
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| {
            CliError::dataset(DatasetError::Write {
                path: path.to_path_buf(),
                source,
            })
        }),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::dataset),
    }
}

fn cmd_run(args: RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    if args.fixtures.is_some() && args.backend != BackendArg::Replay {
        return Err(CliError::usage("--fixtures is only valid with --backend replay"));
    }
    if args.record.is_some() && args.backend == BackendArg::Replay {
        return Err(CliError::usage("--record cannot be combined with --backend replay"));
    }
    let pricing = PricingModel::new(args.price).map_err(CliError::usage)?;
    let params = args.params.unwrap_or_default();
    let inner = make_backend(args.backend, args.fixtures.as_deref())?;

    let output = match &args.record {
        Some(path) => {
            let recorder = RecordingBackend::new(inner);
            let output = execute_run(&args.prompts, &recorder, params, args.max_in_flight)?;
            recorder.into_store().save(path).map_err(CliError::backend)?;
            output
        }
        None => execute_run(&args.prompts, inner.as_ref(), params, args.max_in_flight)?,
    };

    let text = format_submission(&output.rows).map_err(CliError::dataset)?;
    write_output(args.out.as_deref(), &text, stdout)?;

    let failures = output.failures().count();
    let _ = writeln!(stderr, "instances: {}", output.rows.len());
    let _ = writeln!(stderr, "empty outputs: {}", output.empty_outputs());
    let _ = writeln!(stderr, "failed requests: {failures}");
    let _ = writeln!(stderr, "cost: {}", output.cost(pricing));
    Ok(())
}

fn cmd_eval(args: EvalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let normalization = match args.map_normalization {
        MapNormArg::MinKGold => MapNormalization::MinKGold,
        MapNormArg::K => MapNormalization::K,
    };
    let report = evaluate_with(&args.gold, &args.pred, normalization).map_err(|e| match e {
        MetricError::ZeroK => CliError::usage(e),
        other => CliError::dataset(other),
    })?;
    let text = match args.format {
        FormatArg::Table => report.to_string(),
        FormatArg::Kv => report.to_kv(),
    };
    stdout.write_all(text.as_bytes()).map_err(CliError::dataset)
}

fn cmd_cost(args: CostArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let pricing = PricingModel::new(args.price).map_err(CliError::usage)?;
    let prompts = load_prompts(&args.prompts)?;
    let instances = load_instances(&args.prompts.dataset).map_err(CliError::dataset)?;
    let report = estimate_run_cost(
        &instances,
        &prompts,
        args.prompts.mode.into(),
        pricing,
        args.completion_allowance,
    )
    .map_err(CliError::usage)?;
    writeln!(stdout, "{report}").map_err(CliError::dataset)
}

fn cmd_record(args: RecordArgs, stderr: &mut dyn Write) -> Result<(), CliError> {
    if args.backend == BackendArg::Replay {
        return Err(CliError::usage("record-fixtures needs --backend api or mock"));
    }
    let inner = make_backend(args.backend, None)?;
    let recorder = RecordingBackend::with_store(inner, FixtureStore::new());
    let output = execute_run(&args.prompts, &recorder, ScoreParams::default(), args.max_in_flight)?;
    let store = recorder.into_store();
    store.save(&args.out).map_err(CliError::backend)?;
    let _ = writeln!(
        stderr,
        "recorded {} responses for {} instances ({} failed requests)",
        store.len(),
        output.rows.len(),
        output.failures().count()
    );
    Ok(())
}

/// Runs a parsed command, writing results to `stdout` and summaries to `stderr`.
pub fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args, stdout, stderr),
        Command::Eval(args) => cmd_eval(args, stdout),
        Command::Cost(args) => cmd_cost(args, stdout),
        Command::RecordFixtures(args) => cmd_record(args, stderr),
    }
}

pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    match dispatch(cli, &mut stdout, &mut stderr) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let _ = writeln!(stderr, "error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_flag() {
        assert_eq!(parse_params("5.5,0.5").unwrap(), ScoreParams::default());
        assert!(parse_params("5.5").is_err());
        assert!(parse_params("0,0.5").is_err());
        assert!(parse_params("a,b").is_err());
    }

    #[test]
    fn unknown_flags_rejected() {
        let err = Cli::try_parse_from(["lexsimp", "eval", "--gold", "g", "--pred", "p", "--bogus"]).unwrap_err();
        assert!(err.use_stderr());
    }

    #[test]
    fn fixtures_conflict_with_mock() {
        let cli = Cli::try_parse_from([
            "lexsimp", "run", "--dataset", "d", "--lang", "en", "--mode", "single", "--backend", "mock",
            "--fixtures", "f",
        ])
        .unwrap();
        let err = dispatch(cli, &mut Vec::new(), &mut Vec::new()).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
    }
}
