//! Prompt-template rendering and mention-pair generation.
//!
//! The template strings are fixed constants; rendering is plain slot
//! substitution so outputs are reproducible byte for byte. Six families
//! are supported: two SRL QA formats, a generic multiple-choice format,
//! the iterative QA format that replays earlier answers, and the two
//! coreference yes/no formats.

use crate::error::Error;
use crate::model::{CorefInstance, Mention};
use crate::Result;

/// `question: <ques> context: <context>`
pub const T5_QA_TEMPLATE: &str = "question: {question} context: {context}";

/// `<context> \n In the above sentence, <ques>` (literal newline).
pub const FLAN_QA_TEMPLATE: &str = "{context} \n In the above sentence, {question}";

/// `$answer$ ; $mcoptions$=(A) <o1> (B) <o2> ... ; <context> <question>`.
/// The double space before the second semicolon is part of the format.
pub const MACAW_MC_TEMPLATE: &str = "$answer$ ; $mcoptions$={options}  ; {context} {question}";

/// `<context> \n In the above passage, does <m1> refer to <m2>? Yes or No?`
pub const COREF_FLAN_TEMPLATE: &str =
    "{context} \n In the above passage, does {m1} refer to {m2}? Yes or No?";

/// Question slot used by the Macaw coreference family.
pub const COREF_QUESTION_TEMPLATE: &str = "Does {m1} refer to {m2}?";

/// Prior question/answer pair replayed inside an iterative prompt.
pub const ITERATIVE_PRIOR_TEMPLATE: &str = "Question: {question} Answer: {answer}";

/// Iterative step with at least one prior: context, all prior QA pairs,
/// then the current question with the no-overlap instruction. The first
/// step (no priors) renders exactly like `flan-qa`.
pub const FLAN_ITERATIVE_TEMPLATE: &str = "{context} \n {priors} \n In the above sentence, \
{question} The answer must not overlap with any of the previous answers.";

/// The six template families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TemplateFamily {
    T5Qa,
    FlanQa,
    MacawMc,
    FlanIterative,
    CorefMacaw,
    CorefFlan,
}

impl TemplateFamily {
    pub const ALL: [TemplateFamily; 6] = [
        TemplateFamily::T5Qa,
        TemplateFamily::FlanQa,
        TemplateFamily::MacawMc,
        TemplateFamily::FlanIterative,
        TemplateFamily::CorefMacaw,
        TemplateFamily::CorefFlan,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TemplateFamily::T5Qa => "t5-qa",
            TemplateFamily::FlanQa => "flan-qa",
            TemplateFamily::MacawMc => "macaw-mc",
            TemplateFamily::FlanIterative => "flan-iterative",
            TemplateFamily::CorefMacaw => "coref-macaw",
            TemplateFamily::CorefFlan => "coref-flan",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == name)
            .ok_or_else(|| {
                Error::validation(format!(
                    "unknown template family {name:?}; expected one of {:?}",
                    Self::ALL.map(|f| f.name())
                ))
            })
    }

    pub fn is_coref(&self) -> bool {
        matches!(self, TemplateFamily::CorefMacaw | TemplateFamily::CorefFlan)
    }

    /// The generation choices whose score difference forms the link score,
    /// as (yes, no). Only the coreference families restrict generations.
    pub fn yes_no_choices(&self) -> Option<(&'static str, &'static str)> {
        match self {
            TemplateFamily::CorefMacaw => Some(("$answer$ = Yes", "$answer$ = No")),
            TemplateFamily::CorefFlan => Some(("Yes", "No")),
            _ => None,
        }
    }
}

impl std::fmt::Display for TemplateFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An already-answered question replayed in an iterative prompt.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QaPair {
    pub question: String,
    pub answer: String,
}

/// A prompt to render: the family plus whichever slots it references.
#[derive(Debug, Clone, Default)]
pub struct PromptRequest {
    pub family: Option<TemplateFamily>,
    pub question: Option<String>,
    pub context: Option<String>,
    pub mention_pair: Option<(String, String)>,
    /// Multiple-choice options for `macaw-mc`.
    pub choices: Vec<String>,
    /// Answered prefix for `flan-iterative`, in dataset question order.
    pub priors: Vec<QaPair>,
    /// The instance's full question sequence, for validating the priors.
    pub question_order: Vec<String>,
}

impl PromptRequest {
    fn family(&self) -> Result<TemplateFamily> {
        self.family
            .ok_or_else(|| Error::validation("prompt request has no template family"))
    }

    fn slot<'a>(&self, name: &str, value: &'a Option<String>) -> Result<&'a str> {
        match value.as_deref() {
            Some(v) if !v.trim().is_empty() => Ok(v),
            _ => Err(Error::validation(format!(
                "template {} requires a non-empty {name} slot",
                self.family.map(|f| f.name()).unwrap_or("?")
            ))),
        }
    }

    fn mentions(&self) -> Result<(&str, &str)> {
        match &self.mention_pair {
            Some((m1, m2)) if !m1.trim().is_empty() && !m2.trim().is_empty() => {
                Ok((m1.as_str(), m2.as_str()))
            }
            _ => Err(Error::validation(format!(
                "template {} requires a mention pair",
                self.family.map(|f| f.name()).unwrap_or("?")
            ))),
        }
    }
}

/// Renders a request with its family's template, bit-exact.
pub fn render_prompt(request: &PromptRequest) -> Result<String> {
    match request.family()? {
        TemplateFamily::T5Qa => {
            let question = request.slot("question", &request.question)?;
            let context = request.slot("context", &request.context)?;
            Ok(T5_QA_TEMPLATE
                .replace("{question}", question)
                .replace("{context}", context))
        }
        TemplateFamily::FlanQa => {
            let question = request.slot("question", &request.question)?;
            let context = request.slot("context", &request.context)?;
            Ok(render_flan_qa(context, question))
        }
        TemplateFamily::MacawMc => {
            let question = request.slot("question", &request.question)?;
            let context = request.slot("context", &request.context)?;
            if request.choices.is_empty() {
                return Err(Error::validation("template macaw-mc requires choices"));
            }
            Ok(render_macaw_mc(context, question, &request.choices))
        }
        TemplateFamily::FlanIterative => render_iterative_prompt(request),
        TemplateFamily::CorefMacaw => {
            let context = request.slot("context", &request.context)?;
            let (m1, m2) = request.mentions()?;
            let question = COREF_QUESTION_TEMPLATE
                .replace("{m1}", m1)
                .replace("{m2}", m2);
            Ok(render_macaw_mc(
                context,
                &question,
                &["Yes".to_string(), "No".to_string()],
            ))
        }
        TemplateFamily::CorefFlan => {
            let context = request.slot("context", &request.context)?;
            let (m1, m2) = request.mentions()?;
            Ok(COREF_FLAN_TEMPLATE
                .replace("{context}", context)
                .replace("{m1}", m1)
                .replace("{m2}", m2))
        }
    }
}

fn render_flan_qa(context: &str, question: &str) -> String {
    FLAN_QA_TEMPLATE
        .replace("{context}", context)
        .replace("{question}", question)
}

fn render_macaw_mc(context: &str, question: &str, choices: &[String]) -> String {
    let options = choices
        .iter()
        .enumerate()
        .map(|(i, choice)| format!("({}) {choice}", (b'A' + i as u8) as char))
        .collect::<Vec<_>>()
        .join(" ");
    MACAW_MC_TEMPLATE
        .replace("{options}", &options)
        .replace("{context}", context)
        .replace("{question}", question)
}

/// Renders one step of the iterative flow. The priors must be exactly the
/// answered prefix of the declared question order, and the current
/// question the next one; the first step falls back to the plain Flan QA
/// template.
pub fn render_iterative_prompt(request: &PromptRequest) -> Result<String> {
    let question = request.slot("question", &request.question)?;
    let context = request.slot("context", &request.context)?;
    if request.question_order.is_empty() {
        return Err(Error::validation(
            "iterative prompts need the instance's question order",
        ));
    }
    if request.priors.len() >= request.question_order.len() {
        return Err(Error::validation(
            "iterative prompt has more priors than declared questions",
        ));
    }
    for (i, prior) in request.priors.iter().enumerate() {
        if prior.question != request.question_order[i] {
            return Err(Error::validation(format!(
                "iterative priors out of declared order at position {i}: \
                 expected {:?}, got {:?}",
                request.question_order[i], prior.question
            )));
        }
    }
    if request.question_order[request.priors.len()] != question {
        return Err(Error::validation(format!(
            "iterative prompt question {:?} is not next in the declared order",
            question
        )));
    }

    if request.priors.is_empty() {
        return Ok(render_flan_qa(context, question));
    }
    let priors = request
        .priors
        .iter()
        .map(|p| {
            ITERATIVE_PRIOR_TEMPLATE
                .replace("{question}", &p.question)
                .replace("{answer}", &p.answer)
        })
        .collect::<Vec<_>>()
        .join(" \n ");
    Ok(FLAN_ITERATIVE_TEMPLATE
        .replace("{context}", context)
        .replace("{priors}", &priors)
        .replace("{question}", question))
}

/// All unordered mention pairs within the sentence window: a pair is kept
/// when `|sentence_i - sentence_j| < window`. Without a window every pair
/// is generated. The earlier mention always comes first.
pub fn generate_mention_pairs(
    mentions: &[Mention],
    window_sentences: Option<usize>,
) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..mentions.len() {
        for j in (i + 1)..mentions.len() {
            let within = match window_sentences {
                None => true,
                Some(w) => mentions[i].sentence_index.abs_diff(mentions[j].sentence_index) < w,
            };
            if within {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// How much document context a coreference prompt carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContextStyle {
    /// Only the sentence(s) containing the two mentions.
    #[default]
    Relevant,
    /// Relevant sentences with the mentions wrapped in asterisks.
    Highlighted,
    /// The whole document.
    Full,
    /// The whole document with the mentions wrapped in asterisks.
    FullHighlighted,
}

impl ContextStyle {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "rel" | "relevant" => Ok(ContextStyle::Relevant),
            "hlght" | "highlighted" => Ok(ContextStyle::Highlighted),
            "full" => Ok(ContextStyle::Full),
            "full-hlght" | "full-highlighted" => Ok(ContextStyle::FullHighlighted),
            _ => Err(Error::validation(format!(
                "unknown context style {name:?}; expected rel, hlght, full, or full-hlght"
            ))),
        }
    }
}

/// Builds the context string for a mention pair. Relevant styles use the
/// sentence(s) containing the mentions, concatenated in document order and
/// deduplicated when both mentions share a sentence.
pub fn pair_context(
    instance: &CorefInstance,
    i: usize,
    j: usize,
    style: ContextStyle,
) -> Result<String> {
    let (first, second) = if i <= j { (i, j) } else { (j, i) };
    let a = &instance.mentions[first];
    let b = &instance.mentions[second];
    let highlight = matches!(
        style,
        ContextStyle::Highlighted | ContextStyle::FullHighlighted
    );

    let sentence = |index: usize| -> Result<String> {
        instance.sentences.get(index).cloned().ok_or_else(|| {
            Error::validation(format!(
                "document {}: mention references sentence {index} but only {} sentences \
                 are present",
                instance.document_id,
                instance.sentences.len()
            ))
        })
    };

    let render_sentence = |index: usize| -> Result<String> {
        let text = sentence(index)?;
        if !highlight {
            return Ok(text);
        }
        let mut in_sentence: Vec<&Mention> = [a, b]
            .into_iter()
            .filter(|m| m.sentence_index == index)
            .collect();
        in_sentence.sort_by_key(|m| std::cmp::Reverse(m.token_start));
        let mut tokens: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        for mention in in_sentence {
            if mention.token_start >= mention.token_end || mention.token_end > tokens.len() {
                return Err(Error::validation(format!(
                    "document {}: mention {:?} span [{}, {}) out of range for sentence {index}",
                    instance.document_id, mention.id, mention.token_start, mention.token_end
                )));
            }
            tokens[mention.token_start] = format!("*{}", tokens[mention.token_start]);
            tokens[mention.token_end - 1] = format!("{}*", tokens[mention.token_end - 1]);
        }
        Ok(tokens.join(" "))
    };

    match style {
        ContextStyle::Relevant | ContextStyle::Highlighted => {
            let (si, sj) = if a.sentence_index <= b.sentence_index {
                (a.sentence_index, b.sentence_index)
            } else {
                (b.sentence_index, a.sentence_index)
            };
            if si == sj {
                render_sentence(si)
            } else {
                Ok(format!("{} {}", render_sentence(si)?, render_sentence(sj)?))
            }
        }
        ContextStyle::Full | ContextStyle::FullHighlighted => {
            let parts: Result<Vec<String>> =
                (0..instance.sentences.len()).map(render_sentence).collect();
            Ok(parts?.join(" "))
        }
    }
}
