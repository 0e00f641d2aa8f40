//! The six prompt templates, their sampling temperatures, and the few-shot
//! exemplars they embed.
//!
//! English templates are fixed text. Spanish and Portuguese templates name
//! the output language in the request sentence and take their worked examples
//! from an exemplar file (see [`ExemplarSet::parse`]); bundled defaults are
//! available through [`ExemplarSet::bundled`].
//!
//! Templates use `{context_sentence}` and `{complex_word}` placeholders. The
//! complex word is wrapped in ASCII double quotes.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Instance, Language};

pub const CONTEXT_PLACEHOLDER: &str = "{context_sentence}";
pub const WORD_PLACEHOLDER: &str = "{complex_word}";

/// Number of suggestions each exemplar demonstrates.
pub const EXEMPLAR_ANSWERS: usize = 10;

/// Number of exemplar blocks a language configuration must provide:
/// one for the single-shot context prompt, two for the two-shot context
/// prompt, one for the single-shot prompt without context.
pub const EXEMPLAR_BLOCKS: usize = 4;

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("no exemplar configuration for {0}; pass an exemplar file")]
    MissingExemplars(Language),
    #[error("exemplars are for {found}, prompts requested for {expected}")]
    ExemplarLanguage { expected: Language, found: Language },
    #[error("exemplar block {block}: {message}")]
    BadExemplar { block: usize, message: String },
    #[error("cannot read exemplar file: {0}")]
    Io(#[from] std::io::Error),
    #[error("template for {id} is missing placeholder {placeholder}")]
    MissingPlaceholder { id: PromptId, placeholder: &'static str },
    #[error("template for {id} has unsubstituted placeholder {placeholder:?}")]
    UnknownPlaceholder { id: PromptId, placeholder: String },
    #[error("unknown prompt id {0:?}")]
    UnknownId(String),
}

/// Identifies one of the six prompts, in their canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PromptId {
    ZeroShotContextConservative,
    ZeroShotContextCreative,
    OneShotContext,
    TwoShotContext,
    ZeroShotNoContext,
    OneShotNoContext,
}

impl PromptId {
    pub const ALL: [PromptId; 6] = [
        PromptId::ZeroShotContextConservative,
        PromptId::ZeroShotContextCreative,
        PromptId::OneShotContext,
        PromptId::TwoShotContext,
        PromptId::ZeroShotNoContext,
        PromptId::OneShotNoContext,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PromptId::ZeroShotContextConservative => "zero_ctx_conservative",
            PromptId::ZeroShotContextCreative => "zero_ctx_creative",
            PromptId::OneShotContext => "one_shot_ctx",
            PromptId::TwoShotContext => "two_shot_ctx",
            PromptId::ZeroShotNoContext => "zero_noctx",
            PromptId::OneShotNoContext => "one_shot_noctx",
        }
    }

    pub fn default_temperature(self) -> f64 {
        match self {
            PromptId::ZeroShotContextConservative => 0.3,
            PromptId::ZeroShotContextCreative => 0.8,
            PromptId::OneShotContext => 0.5,
            PromptId::TwoShotContext => 0.5,
            PromptId::ZeroShotNoContext => 0.7,
            PromptId::OneShotNoContext => 0.6,
        }
    }

    pub fn uses_context(self) -> bool {
        !matches!(self, PromptId::ZeroShotNoContext | PromptId::OneShotNoContext)
    }

    pub fn shots(self) -> usize {
        match self {
            PromptId::ZeroShotContextConservative
            | PromptId::ZeroShotContextCreative
            | PromptId::ZeroShotNoContext => 0,
            PromptId::OneShotContext | PromptId::OneShotNoContext => 1,
            PromptId::TwoShotContext => 2,
        }
    }
}

impl fmt::Display for PromptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptId {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PromptId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| PromptError::UnknownId(s.to_string()))
    }
}

/// A worked example embedded in few-shot prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExemplarBlock {
    pub context: String,
    pub complex_word: String,
    answers: Vec<String>,
}

impl ExemplarBlock {
    pub fn new<S: Into<String>>(
        context: impl Into<String>,
        complex_word: impl Into<String>,
        answers: impl IntoIterator<Item = S>,
    ) -> Result<Self, String> {
        let block = ExemplarBlock {
            context: context.into(),
            complex_word: complex_word.into(),
            answers: answers.into_iter().map(Into::into).collect(),
        };
        if block.answers.len() != EXEMPLAR_ANSWERS {
            return Err(format!(
                "expected {EXEMPLAR_ANSWERS} answers, found {}",
                block.answers.len()
            ));
        }
        let fields = [&block.context, &block.complex_word]
            .into_iter()
            .chain(block.answers.iter());
        for field in fields {
            if field.trim().is_empty() {
                return Err("empty field".to_string());
            }
            if field.contains(['{', '}', '\n', '\r']) {
                return Err(format!("field {field:?} contains braces or a line break"));
            }
        }
        Ok(block)
    }

    pub fn answers(&self) -> &[String] {
        &self.answers
    }

    fn answer_list(&self) -> String {
        let mut out = String::from("Answer:");
        for (i, answer) in self.answers.iter().enumerate() {
            out.push_str(&format!("\n{}. {}", i + 1, answer));
        }
        out.push_str("\n\n");
        out
    }
}

/// The four worked examples one language's prompt set needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExemplarSet {
    pub language: Language,
    pub one_shot_context: ExemplarBlock,
    pub two_shot_context: [ExemplarBlock; 2],
    pub one_shot_no_context: ExemplarBlock,
}

const SPANISH_EXEMPLARS: &str = include_str!("../exemplars/es.txt");
const PORTUGUESE_EXEMPLARS: &str = include_str!("../exemplars/pt.txt");

impl ExemplarSet {
    /// Parses an exemplar file.
    ///
    /// The file holds four blocks separated by blank lines. Each block is a
    /// context line, a complex-word line, then ten answer lines. Lines starting
    /// with `#` are comments. Blocks are assigned in order: single-shot
    /// context, the two two-shot context examples, single-shot without context
    /// (whose context line is not rendered).
    pub fn parse(language: Language, text: &str) -> Result<Self, PromptError> {
        let mut blocks: Vec<Vec<&str>> = vec![];
        let mut current: Vec<&str> = vec![];
        for line in text.lines() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.starts_with('#') {
                continue;
            }
            if line.trim().is_empty() {
                if !current.is_empty() {
                    blocks.push(std::mem::take(&mut current));
                }
            } else {
                current.push(line.trim());
            }
        }
        if !current.is_empty() {
            blocks.push(current);
        }
        if blocks.len() != EXEMPLAR_BLOCKS {
            return Err(PromptError::BadExemplar {
                block: blocks.len(),
                message: format!("expected {EXEMPLAR_BLOCKS} blocks, found {}", blocks.len()),
            });
        }
        let mut parsed = blocks.into_iter().enumerate().map(|(i, lines)| {
            let bad = |message: String| PromptError::BadExemplar { block: i + 1, message };
            if lines.len() != 2 + EXEMPLAR_ANSWERS {
                return Err(bad(format!(
                    "expected {} lines, found {}",
                    2 + EXEMPLAR_ANSWERS,
                    lines.len()
                )));
            }
            ExemplarBlock::new(lines[0], lines[1], lines[2..].iter().copied()).map_err(bad)
        });
        let mut next = || parsed.next().expect("block count checked");
        Ok(ExemplarSet {
            language,
            one_shot_context: next()?,
            two_shot_context: [next()?, next()?],
            one_shot_no_context: next()?,
        })
    }

    pub fn load(language: Language, path: &Path) -> Result<Self, PromptError> {
        Self::parse(language, &fs::read_to_string(path)?)
    }

    /// Exemplars shipped with the crate for each language.
    pub fn bundled(language: Language) -> Self {
        let text = match language {
            Language::English => return english_exemplars(),
            Language::Spanish => SPANISH_EXEMPLARS,
            Language::Portuguese => PORTUGUESE_EXEMPLARS,
        };
        Self::parse(language, text).expect("bundled exemplars are well-formed")
    }
}

fn block(context: &str, word: &str, answers: [&str; EXEMPLAR_ANSWERS]) -> ExemplarBlock {
    ExemplarBlock {
        context: context.to_string(),
        complex_word: word.to_string(),
        answers: answers.map(str::to_string).to_vec(),
    }
}

fn english_exemplars() -> ExemplarSet {
    ExemplarSet {
        language: Language::English,
        one_shot_context: block(
            "A local witness said a separate group of attackers disguised in burqas \u{2014} the head-to-toe robes worn by conservative Afghan women \u{2014} then tried to storm the compound.",
            "disguised",
            [
                "concealed", "dressed", "hidden", "camouflaged", "changed",
                "covered", "masked", "unrecognizable", "converted", "impersonated",
            ],
        ),
        two_shot_context: [
            block(
                "That prompted the military to deploy its largest warship, the BRP Gregorio del Pilar, which was recently acquired from the United States.",
                "deploy",
                [
                    "send", "post", "use", "position", "send out",
                    "employ", "extend", "launch", "let loose", "organize",
                ],
            ),
            block(
                "The daily death toll in Syria has declined as the number of observers has risen, but few experts expect the U.N. plan to succeed in its entirety.",
                "observers",
                [
                    "watchers", "spectators", "audience", "viewers", "witnesses",
                    "patrons", "followers", "detectives", "reporters", "onlookers",
                ],
            ),
        ],
        // Only the word and answers of this block are rendered.
        one_shot_no_context: block(
            "",
            "compulsory",
            [
                "mandatory", "required", "essential", "forced", "important",
                "necessary", "obligatory", "unavoidable", "binding", "prescribed",
            ],
        ),
    }
}

/// One prompt: template text plus the sampling settings it is issued with.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptSpec {
    pub id: PromptId,
    pub template: String,
    pub temperature: f64,
    pub uses_context: bool,
    pub shots: usize,
    pub language: Language,
}

impl PromptSpec {
    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    /// Checks that the template carries the placeholders its flags promise.
    pub fn validate(&self) -> Result<(), PromptError> {
        if !self.template.contains(WORD_PLACEHOLDER) {
            return Err(PromptError::MissingPlaceholder {
                id: self.id,
                placeholder: WORD_PLACEHOLDER,
            });
        }
        if self.uses_context && !self.template.contains(CONTEXT_PLACEHOLDER) {
            return Err(PromptError::MissingPlaceholder {
                id: self.id,
                placeholder: CONTEXT_PLACEHOLDER,
            });
        }
        Ok(())
    }
}

/// Wording that changes between English and the transferred languages.
struct Phrasing {
    exemplar_request: String,
    target_request: String,
    synonyms_request: String,
    easier_words: String,
}

impl Phrasing {
    fn for_language(language: Language) -> Self {
        match language {
            Language::English => Phrasing {
                exemplar_request: "list ten alternative words for".into(),
                target_request: "list ten alternatives for".into(),
                synonyms_request: "Give me ten simplified synonyms for the following word:".into(),
                easier_words: "Find ten easier words for".into(),
            },
            other => {
                let name = other.name();
                Phrasing {
                    exemplar_request: format!("list ten alternative {name} words for"),
                    target_request: format!("list ten alternative {name} words for"),
                    synonyms_request: format!(
                        "Give me ten simplified {name} synonyms for the following word:"
                    ),
                    easier_words: format!("Find ten easier {name} words for"),
                }
            }
        }
    }

    fn context_block(&self, context: &str, word: &str, request: &str) -> String {
        format!(
            "Context: {context}\nQuestion: Given the above context, {request} \"{word}\" that are easier to understand.\n"
        )
    }

    fn context_exemplar(&self, block: &ExemplarBlock) -> String {
        let mut out = self.context_block(&block.context, &block.complex_word, &self.exemplar_request);
        out.push_str(&block.answer_list());
        out
    }

    fn context_query(&self) -> String {
        let mut out = self.context_block(CONTEXT_PLACEHOLDER, WORD_PLACEHOLDER, &self.target_request);
        out.push_str("Answer:");
        out
    }

    fn easier_question(&self, word: &str) -> String {
        format!("Question: {} \"{word}\".\n", self.easier_words)
    }
}

/// The six prompts for `language`, in [`PromptId::ALL`] order.
///
/// English falls back to the bundled exemplars when `exemplars` is `None`;
/// the other languages require an explicit exemplar set.
pub fn default_prompt_set(
    language: Language,
    exemplars: Option<&ExemplarSet>,
) -> Result<Vec<PromptSpec>, PromptError> {
    let bundled;
    let exemplars = match (exemplars, language) {
        (Some(set), _) => set,
        (None, Language::English) => {
            bundled = ExemplarSet::bundled(Language::English);
            &bundled
        }
        (None, other) => return Err(PromptError::MissingExemplars(other)),
    };
    if exemplars.language != language {
        return Err(PromptError::ExemplarLanguage {
            expected: language,
            found: exemplars.language,
        });
    }
    let phrasing = Phrasing::for_language(language);
    let query = phrasing.context_query();

    let specs = PromptId::ALL
        .into_iter()
        .map(|id| {
            let template = match id {
                PromptId::ZeroShotContextConservative | PromptId::ZeroShotContextCreative => {
                    query.clone()
                }
                PromptId::OneShotContext => {
                    phrasing.context_exemplar(&exemplars.one_shot_context) + &query
                }
                PromptId::TwoShotContext => {
                    let [first, second] = &exemplars.two_shot_context;
                    phrasing.context_exemplar(first) + &phrasing.context_exemplar(second) + &query
                }
                PromptId::ZeroShotNoContext => {
                    format!("{} {WORD_PLACEHOLDER}", phrasing.synonyms_request)
                }
                PromptId::OneShotNoContext => {
                    let block = &exemplars.one_shot_no_context;
                    let mut text = phrasing.easier_question(&block.complex_word);
                    text.push_str(&block.answer_list());
                    text.push_str(&phrasing.easier_question(WORD_PLACEHOLDER));
                    text.push_str("Answer:");
                    text
                }
            };
            PromptSpec {
                id,
                template,
                temperature: id.default_temperature(),
                uses_context: id.uses_context(),
                shots: id.shots(),
                language,
            }
        })
        .collect();
    Ok(specs)
}

/// Substitutes the instance into the template in a single left-to-right pass,
/// so braces inside the instance text are never reinterpreted.
pub fn render(spec: &PromptSpec, instance: &Instance) -> Result<String, PromptError> {
    spec.validate()?;
    let template = spec.template.as_str();
    let mut out = String::with_capacity(template.len() + instance.context_sentence.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let tail = &rest[open..];
        let Some(close) = tail.find('}') else {
            return Err(PromptError::UnknownPlaceholder {
                id: spec.id,
                placeholder: tail.to_string(),
            });
        };
        let placeholder = &tail[..=close];
        match placeholder {
            CONTEXT_PLACEHOLDER => out.push_str(&instance.context_sentence),
            WORD_PLACEHOLDER => out.push_str(&instance.complex_word),
            other => {
                return Err(PromptError::UnknownPlaceholder {
                    id: spec.id,
                    placeholder: other.to_string(),
                })
            }
        }
        rest = &tail[close + 1..];
    }
    if rest.contains('}') {
        return Err(PromptError::UnknownPlaceholder {
            id: spec.id,
            placeholder: "}".to_string(),
        });
    }
    out.push_str(rest);
    Ok(out)
}
