//! Acceptance criteria. Each test prints one PASS/FAIL line and fails on FAIL.
//!
//! Run with `cargo test -p lexsimp --test acceptance -- --nocapture` to see
//! the report.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexsimp::backend::{BackendError, CompletionBackend, CompletionRequest, CompletionResponse, MockBackend};
use lexsimp::cost::{estimate_run_cost, PricingModel, RunMode, DEFAULT_COMPLETION_ALLOWANCE};
use lexsimp::ensemble::{combine, score_all, PromptRanking, ScoreParams};
use lexsimp::metrics::{
    acc_at_1, acc_at_k_top1, evaluate_pairs, evaluate_with, map_at_k, potential_at_k, MapNormalization,
};
use lexsimp::model::{load_instances, CandidateList, GoldLabelSet, Instance, Language};
use lexsimp::pipeline::{run, RunConfig};
use lexsimp::postprocess::{filter_candidates, parse_suggestions, RawCandidates};
use lexsimp::prompts::{default_prompt_set, render, ExemplarSet, PromptId};

fn report(id: &str, name: &str, ok: bool, detail: String) {
    println!("[{}] {id} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} {name} failed: {detail}");
}

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

const VOCAB: [&str; 16] = [
    "send", "post", "use", "spread", "place", "move", "set up", "launch", "station", "position", "dispatch",
    "arrange", "field", "release", "put", "base",
];

fn random_list(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<String> {
    let len = rng.random_range(0..=max_len);
    let mut words: Vec<&str> = VOCAB.to_vec();
    words.shuffle(rng);
    words.into_iter().take(len).map(String::from).collect()
}

fn random_rankings(rng: &mut ChaCha8Rng) -> Vec<PromptRanking> {
    let n = rng.random_range(0..=6);
    PromptId::ALL[..n]
        .iter()
        .map(|&id| PromptRanking::new(id, CandidateList::new(random_list(rng, 10)).unwrap()))
        .collect()
}

/// Brute force: for every distinct suggestion, look up its rank in each list
/// by linear search and add `max(offset - slope * rank, 0)`.
fn oracle_scores(lists: &[Vec<String>], offset: f64, slope: f64) -> Vec<(String, f64, usize, usize)> {
    let mut distinct: Vec<String> = vec![];
    for list in lists {
        for item in list {
            if !distinct.contains(item) {
                distinct.push(item.clone());
            }
        }
    }
    let mut out = vec![];
    for item in distinct {
        let mut score = 0.0;
        let mut support = 0;
        let mut best = usize::MAX;
        for list in lists {
            if let Some(pos) = list.iter().position(|x| *x == item) {
                let rank = pos + 1;
                let v = offset - slope * rank as f64;
                score += if v > 0.0 { v } else { 0.0 };
                support += 1;
                best = best.min(rank);
            }
        }
        out.push((item, score, support, best));
    }
    out.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then(b.2.cmp(&a.2))
            .then(a.3.cmp(&b.3))
            .then(a.0.cmp(&b.0))
    });
    out
}

#[test]
fn ac1_ensemble_matches_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = ScoreParams::default();
    let mut mismatches = 0;
    for _ in 0..1000 {
        let rankings = random_rankings(&mut rng);
        let lists: Vec<Vec<String>> = rankings.iter().map(|r| r.candidates.items().to_vec()).collect();
        let expected = oracle_scores(&lists, 5.5, 0.5);
        let scored = score_all(&rankings, params);
        let got: Vec<(String, f64, usize, usize)> = scored
            .into_iter()
            .map(|c| (c.text, c.score, c.support, c.best_rank))
            .collect();
        let top: Vec<String> = expected.iter().take(10).map(|e| e.0.clone()).collect();
        if got != expected || combine(&rankings, params).items() != top.as_slice() {
            mismatches += 1;
        }
    }

    let word = CandidateList::new(vec!["send".into(), "post".into()]).unwrap();
    let all_first: Vec<PromptRanking> = PromptId::ALL.iter().map(|&id| PromptRanking::new(id, word.clone())).collect();
    let top_score = score_all(&all_first, params)[0].score;

    let elapsed = start.elapsed();
    report(
        "AC1",
        "ensemble oracle equivalence",
        mismatches == 0 && top_score == 30.0 && elapsed < Duration::from_secs(5),
        format!("1000 cases, {mismatches} mismatches, rank-1-everywhere score {top_score}, {elapsed:.2?}"),
    );
}

#[test]
fn ac2_scale_invariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let base = ScoreParams::default();
    let mut differing = 0;
    for _ in 0..200 {
        let rankings = random_rankings(&mut rng);
        let expected = combine(&rankings, base);
        for lambda in [0.1, 3.0, 17.0] {
            let scaled = ScoreParams::new(lambda * 5.5, lambda * 0.5).unwrap();
            if combine(&rankings, scaled) != expected {
                differing += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "AC2",
        "scale invariance",
        differing == 0 && elapsed < Duration::from_secs(2),
        format!("200 cases x 3 factors, {differing} differing, {elapsed:.2?}"),
    );
}

struct MetricOracle {
    counts: HashMap<String, u32>,
}

impl MetricOracle {
    fn new(annotations: &[String]) -> Self {
        let mut counts = HashMap::new();
        for a in annotations {
            *counts.entry(a.trim().to_lowercase()).or_insert(0) += 1;
        }
        MetricOracle { counts }
    }

    fn is_gold(&self, p: &str) -> bool {
        self.counts.contains_key(&p.trim().to_lowercase())
    }

    fn is_top(&self, p: &str) -> bool {
        let max = *self.counts.values().max().unwrap();
        self.counts.get(&p.trim().to_lowercase()) == Some(&max)
    }

    fn potential(&self, preds: &[String], k: usize) -> f64 {
        let hit = preds.iter().take(k).any(|p| self.is_gold(p));
        if hit { 1.0 } else { 0.0 }
    }

    fn top1(&self, preds: &[String], k: usize) -> f64 {
        let hit = preds.iter().take(k).any(|p| self.is_top(p));
        if hit { 1.0 } else { 0.0 }
    }

    /// Average precision, recomputing precision at each cutoff from scratch.
    fn map(&self, preds: &[String], k: usize) -> f64 {
        let cut: Vec<String> = preds.iter().take(k).map(|p| p.trim().to_lowercase()).collect();
        let relevant = |i: usize| self.is_gold(&cut[i]) && !cut[..i].contains(&cut[i]);
        let mut sum = 0.0;
        for i in 0..cut.len() {
            if relevant(i) {
                let hits = (0..=i).filter(|&j| relevant(j)).count();
                sum += hits as f64 / (i + 1) as f64;
            }
        }
        sum / k.min(self.counts.len()) as f64
    }
}

fn random_case(rng: &mut ChaCha8Rng) -> (Vec<String>, Vec<String>) {
    let n = rng.random_range(1..=8);
    let annotations: Vec<String> = (0..n).map(|_| VOCAB[..10].choose(rng).unwrap().to_string()).collect();
    let mut preds = random_list(rng, 10);
    for p in preds.iter_mut() {
        if rng.random_bool(0.1) {
            *p = p.to_uppercase();
        }
    }
    if rng.random_bool(0.1) && !preds.is_empty() {
        let first = preds[0].clone();
        preds.push(first);
    }
    (annotations, preds)
}

#[test]
fn ac3_metrics_match_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<(Vec<String>, Vec<String>)> = (0..1000).map(|_| random_case(&mut rng)).collect();
    let golds: Vec<GoldLabelSet> = cases.iter().map(|(a, _)| GoldLabelSet::from_annotations(a)).collect();

    let mut exact_mismatch = 0;
    let mut map_err: f64 = 0.0;
    let mut sums: BTreeMap<String, f64> = BTreeMap::new();
    for ((annotations, preds), gold) in cases.iter().zip(&golds) {
        let o = MetricOracle::new(annotations);
        let mut exact = vec![(acc_at_1(preds, gold).unwrap(), o.potential(preds, 1), "acc@1".to_string())];
        for k in [1, 2, 3] {
            exact.push((acc_at_k_top1(preds, gold, k).unwrap(), o.top1(preds, k), format!("acc@{k}@top1")));
        }
        for k in [3, 5, 10] {
            exact.push((potential_at_k(preds, gold, k).unwrap(), o.potential(preds, k), format!("potential@{k}")));
            let m = map_at_k(preds, gold, k, MapNormalization::MinKGold).unwrap();
            let expected = o.map(preds, k);
            map_err = map_err.max((m - expected).abs());
            *sums.entry(format!("map@{k}")).or_default() += expected;
        }
        for (got, expected, name) in exact {
            if got != expected {
                exact_mismatch += 1;
            }
            *sums.entry(name).or_default() += expected;
        }
    }

    let pairs: Vec<(&[String], &GoldLabelSet)> = cases.iter().map(|(_, p)| p.as_slice()).zip(&golds).collect();
    let report_all = evaluate_pairs(pairs, MapNormalization::MinKGold).unwrap();
    let mut aggregate_err: f64 = 0.0;
    for (name, value) in report_all.to_kv().lines().filter_map(|l| l.split_once('=')) {
        if let Some(sum) = sums.get(name) {
            aggregate_err = aggregate_err.max((value.parse::<f64>().unwrap() - sum / 1000.0).abs());
        }
    }

    // perfect predictions: distinct gold labels by descending frequency
    let perfect: Vec<Vec<String>> = golds
        .iter()
        .map(|g| {
            let mut labels: Vec<(&String, &u32)> = g.labels().iter().collect();
            labels.sort_by(|a, b| b.1.cmp(a.1));
            labels.into_iter().map(|(l, _)| l.clone()).collect()
        })
        .collect();
    let disjoint: Vec<Vec<String>> = golds.iter().map(|_| vec!["zzz".to_string(), "qqq".to_string()]).collect();
    let eval = |preds: &[Vec<String>]| {
        let r = evaluate_pairs(
            preds.iter().map(Vec::as_slice).zip(&golds),
            MapNormalization::MinKGold,
        )
        .unwrap();
        let mut values = vec![r.acc_at_1];
        values.extend(r.acc_at_k_top1.values());
        values.extend(r.map_at_k.values());
        values.extend(r.potential_at_k.values());
        values
    };
    let perfect_ok = eval(&perfect).iter().all(|&v| v == 1.0);
    let disjoint_ok = eval(&disjoint).iter().all(|&v| v == 0.0);

    let elapsed = start.elapsed();
    report(
        "AC3",
        "metric oracle equivalence",
        exact_mismatch == 0
            && map_err <= 1e-12
            && aggregate_err <= 1e-12
            && perfect_ok
            && disjoint_ok
            && elapsed < Duration::from_secs(10),
        format!(
            "1000 instances, {exact_mismatch} exact mismatches, max MAP error {map_err:e}, \
             max aggregate error {aggregate_err:e}, perfect=1.0 {perfect_ok}, disjoint=0.0 {disjoint_ok}, {elapsed:.2?}"
        ),
    );
}

fn random_item(rng: &mut ChaCha8Rng) -> String {
    const TRIM: [&str; 9] = ["\n", " ", ":", ";", ".", "?", "!", "\t", "  "];
    const PIECES: [&str; 10] = ["To ", "to ", "TO ", "Deploy", "send", "Set Up", "people that are", "MOVE", "a", "\u{e9}l"];
    let mut s = String::new();
    for _ in 0..rng.random_range(0..4) {
        s.push_str(TRIM.choose(rng).unwrap());
    }
    for i in 0..rng.random_range(0..4) {
        if i > 0 {
            s.push_str(TRIM.choose(rng).unwrap());
        }
        s.push_str(PIECES.choose(rng).unwrap());
    }
    for _ in 0..rng.random_range(0..4) {
        s.push_str(TRIM.choose(rng).unwrap());
    }
    s
}

fn raw(items: &[&str]) -> RawCandidates {
    items.iter().copied().collect()
}

#[test]
fn ac4_filter_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut not_idempotent = 0;
    for case in 0..1000 {
        let items: RawCandidates = (0..rng.random_range(0..14)).map(|_| random_item(&mut rng)).collect();
        let language = Language::ALL[case % 3];
        let once = filter_candidates(&items, "deploy", language);
        let again: RawCandidates = once.iter().cloned().collect();
        if filter_candidates(&again, "deploy", language) != once {
            not_idempotent += 1;
        }
    }

    let identity = filter_candidates(&raw(&["To deploy", "send"]), "deploy", Language::English);
    let description = filter_candidates(&raw(&["lunatics", "people that are crazy"]), "maniacs", Language::English);
    let dedup = filter_candidates(&raw(&["Send", "post", "send.", "Post"]), "deploy", Language::English);
    let worked = identity.items() == ["send"]
        && description.items() == ["lunatics"]
        && dedup.items() == ["send", "post"];

    report(
        "AC4",
        "filter properties",
        not_idempotent == 0 && worked,
        format!(
            "1000 random inputs, {not_idempotent} not idempotent; worked behaviors {:?} {:?} {:?}",
            identity.items(),
            description.items(),
            dedup.items()
        ),
    );
}

#[test]
fn ac5_parser_robustness() {
    let inputs: [(&str, &[&str]); 5] = [
        ("\n1. send\n2. post\n3) place", &["send", "post", "place"]),
        ("send, post; place", &["send", "post", "place"]),
        ("- send\n* post\n- \"place\"", &["send", "post", "place"]),
        ("Transforms into a pupa", &["Transforms into a pupa"]),
        ("Transforms into a pupa, ...", &["Transforms into a pupa", "..."]),
    ];
    let mut wrong = vec![];
    for (input, expected) in inputs {
        let parsed = parse_suggestions(input);
        if parsed.items != expected {
            wrong.push(format!("{input:?} -> {:?}", parsed.items));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphabet: Vec<char> = "abc 1.)-*,;:\"'\u{201c}\u{201d}\n\r\t\u{e9}\u{2014}0".chars().collect();
    let mut panics = 0;
    for _ in 0..1000 {
        let len = rng.random_range(0..80);
        let text: String = (0..len)
            .map(|_| {
                if rng.random_bool(0.05) {
                    char::from_u32(rng.random_range(0..0x3000)).unwrap_or('?')
                } else {
                    *alphabet.choose(&mut rng).unwrap()
                }
            })
            .collect();
        let outcome = std::panic::catch_unwind(|| {
            let parsed = parse_suggestions(&text);
            filter_candidates(&parsed, "pupates", Language::English)
        });
        if outcome.is_err() {
            panics += 1;
        }
    }

    report(
        "AC5",
        "parser robustness",
        wrong.is_empty() && panics == 0,
        format!("5 shaped inputs, wrong: {wrong:?}; 1000 fuzzed inputs, {panics} panics"),
    );
}

#[test]
fn ac6_prompt_fidelity() {
    let instance = Instance::new(
        0,
        "Despite the fog, other flights are reported to have landed safely leading up to the collision.",
        "collision",
    );
    let english = default_prompt_set(Language::English, None).unwrap();
    let mut differing = vec![];
    for spec in &english {
        let golden = fs::read_to_string(manifest(&format!("tests/golden/en_{}.txt", spec.id))).unwrap();
        if render(spec, &instance).unwrap() != golden {
            differing.push(spec.id.to_string());
        }
    }

    let spanish = ExemplarSet::bundled(Language::Spanish);
    let es_prompts = default_prompt_set(Language::Spanish, Some(&spanish)).unwrap();
    let es = Instance::new(0, "Las tropas se congregaron en la plaza.", "congregaron");
    let es_text = render(&es_prompts[0], &es).unwrap();
    let spanish_ok = es_text.contains("list ten alternative Spanish words");

    let temperatures: Vec<f64> = english.iter().map(|p| p.temperature).collect();
    let temps_ok = temperatures == [0.3, 0.8, 0.5, 0.5, 0.7, 0.6];

    report(
        "AC6",
        "prompt fidelity",
        differing.is_empty() && spanish_ok && temps_ok,
        format!(
            "golden mismatches {differing:?}, Spanish phrase present {spanish_ok}, temperatures {temperatures:?}"
        ),
    );
}

fn offline(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lexsimp"))
        .args(args)
        .env_remove("OPENAI_API_KEY")
        .env("HTTP_PROXY", "http://127.0.0.1:9")
        .env("HTTPS_PROXY", "http://127.0.0.1:9")
        .env("ALL_PROXY", "http://127.0.0.1:9")
        .env("http_proxy", "http://127.0.0.1:9")
        .env("https_proxy", "http://127.0.0.1:9")
        .output()
        .expect("binary runs")
}

#[test]
fn ac7_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = manifest("tests/data/trial_en.tsv");
    let dataset = dataset.to_str().unwrap();
    let fixtures = dir.path().join("fixtures.jsonl");
    let fixtures = fixtures.to_str().unwrap();
    let base = ["--dataset", dataset, "--lang", "en", "--mode", "ensemble"];

    let recorded = offline(&[&["record-fixtures"][..], &base, &["--backend", "mock", "--out", fixtures]].concat());
    let mut runs = vec![];
    for i in 0..2 {
        let out = dir.path().join(format!("replay{i}.tsv"));
        let status = offline(
            &[&["run"][..], &base, &["--backend", "replay", "--fixtures", fixtures, "--out", out.to_str().unwrap()]]
                .concat(),
        );
        runs.push((status.status.success(), fs::read(&out).unwrap_or_default()));
    }
    let mock = offline(&[&["run"][..], &base, &["--backend", "mock"]].concat());

    let lines = String::from_utf8_lossy(&runs[0].1).lines().count();
    let identical = runs[0].1 == runs[1].1 && !runs[0].1.is_empty();
    let ok = recorded.status.success() && runs.iter().all(|r| r.0) && identical && lines == 20 && mock.status.success();
    report(
        "AC7",
        "determinism",
        ok,
        format!(
            "record ok {}, replays ok {:?}, byte-identical {identical}, {lines} lines, mock ok {}",
            recorded.status.success(),
            runs.iter().map(|r| r.0).collect::<Vec<_>>(),
            mock.status.success()
        ),
    );
}

/// Answers like the mock and reports usage from a per-prompt table, so each
/// instance costs the same fixed budget.
struct MeteredBackend {
    inner: MockBackend,
    usage: HashMap<String, (u64, u64)>,
}

impl CompletionBackend for MeteredBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let mut response = self.inner.complete(request)?;
        let (prompt_tokens, completion_tokens) = self.usage[&request.prompt];
        response.prompt_tokens = prompt_tokens;
        response.completion_tokens = completion_tokens;
        Ok(response)
    }
}

#[test]
fn ac8a_cost_total() {
    let instances: Vec<Instance> = (0..373)
        .map(|i| Instance::new(i, format!("Officials plan to deploy {i} inspectors next week."), "deploy"))
        .collect();
    let prompts = default_prompt_set(Language::English, None).unwrap();

    // prompt tokens per prompt in canonical order, plus 40 completion tokens each
    let prompt_tokens: [u64; 6] = [60, 60, 190, 300, 50, 100];
    assert_eq!(prompt_tokens.iter().sum::<u64>() + 6 * 40, 1000);
    let mut usage = HashMap::new();
    for instance in &instances {
        for (spec, &tokens) in prompts.iter().zip(&prompt_tokens) {
            usage.insert(render(spec, instance).unwrap(), (tokens, 40));
        }
    }
    let backend = MeteredBackend {
        inner: MockBackend::new(),
        usage,
    };
    let config = RunConfig::new(RunMode::Ensemble, Language::English);
    let out = run(&instances, &prompts, &backend, &config).unwrap();
    let usage = out.cost(PricingModel::default());
    let ok = (6.34..=8.58).contains(&usage.total_cost)
        && usage.per_instance_tokens == 1000.0
        && out.failures().count() == 0;
    report(
        "AC8a",
        "cost total",
        ok,
        format!(
            "373 instances, ensemble {} tokens/instance, total ${:.4} (band 6.34..8.58)",
            usage.per_instance_tokens, usage.total_cost
        ),
    );
}

#[test]
fn ac8b_single_to_ensemble_ratio() {
    let prompts = default_prompt_set(Language::English, None).unwrap();
    let trial = load_instances(&manifest("tests/data/trial_en.tsv")).unwrap();
    let estimate = |mode| {
        estimate_run_cost(&trial, &prompts, mode, PricingModel::default(), DEFAULT_COMPLETION_ALLOWANCE)
            .unwrap()
            .total_tokens as f64
    };
    let (single, ensemble) = (estimate(RunMode::Single), estimate(RunMode::Ensemble));
    let ratio = single / ensemble;
    report(
        "AC8b",
        "single to ensemble cost ratio",
        (1.0 / 6.0 * 0.8..=1.0 / 6.0 * 1.2).contains(&ratio),
        format!(
            "estimated tokens/instance single {:.1}, ensemble {:.1}, ratio {ratio:.4} (band 0.1333..0.2000)",
            single / trial.len() as f64,
            ensemble / trial.len() as f64
        ),
    );
}

/// Set `LEXSIMP_OFFICIAL_DATA` to a directory holding `{en,es,pt}_gold.tsv`
/// and `{en,es,pt}_pred.tsv` from the shared task release.
#[test]
fn ac9_official_outputs() {
    let Some(dir) = std::env::var_os("LEXSIMP_OFFICIAL_DATA").map(PathBuf::from) else {
        println!("[SKIP] AC9 official outputs: LEXSIMP_OFFICIAL_DATA not set");
        return;
    };
    let targets: [(&str, &[(&str, f64)]); 3] = [
        ("en", &[("acc@1", 0.8096), ("potential@10", 0.9946)]),
        ("es", &[("acc@1", 0.6521)]),
        ("pt", &[("acc@1", 0.7700)]),
    ];
    let mut checked = 0;
    let mut off = vec![];
    for (lang, expected) in targets {
        let gold = dir.join(format!("{lang}_gold.tsv"));
        let pred = dir.join(format!("{lang}_pred.tsv"));
        if !gold.exists() || !pred.exists() {
            println!("[SKIP] AC9 {lang}: files missing under {}", dir.display());
            continue;
        }
        let kv = evaluate_with(&gold, &pred, MapNormalization::MinKGold).unwrap().to_kv();
        let values: HashMap<&str, f64> = kv
            .lines()
            .filter_map(|l| l.split_once('='))
            .filter_map(|(k, v)| v.parse().ok().map(|v| (k, v)))
            .collect();
        for &(metric, target) in expected {
            checked += 1;
            let got = values[metric];
            if (got - target).abs() > 0.0005 {
                off.push(format!("{lang} {metric} {got:.4} vs {target:.4}"));
            }
        }
    }
    if checked > 0 {
        report("AC9", "official outputs", off.is_empty(), format!("{checked} values checked, off: {off:?}"));
    }
}

#[test]
fn parallel_and_serial_runs_agree() {
    let instances = load_instances(&manifest("tests/data/trial_en.tsv")).unwrap();
    let prompts = default_prompt_set(Language::English, None).unwrap();
    let mut serial = RunConfig::new(RunMode::Ensemble, Language::English);
    serial.max_in_flight = 1;
    let mut wide = serial.clone();
    wide.max_in_flight = 16;
    let a = run(&instances, &prompts, &MockBackend::new(), &serial).unwrap();
    let b = run(&instances, &prompts, &MockBackend::new(), &wide).unwrap();
    assert_eq!(a.rows, b.rows);
    let texts: HashSet<&str> = a.rows.iter().flat_map(|(_, c)| c.iter().map(String::as_str)).collect();
    assert!(!texts.is_empty());
}
