//! `spanlink score`: fill instances with candidate scores from a backend.
//!
//! SRL instances get per-role ranked candidates (generate-top-n); for the
//! iterative family each instance is scored question by question with
//! every earlier answer replayed into the next prompt. Coreference
//! instances get pairwise link scores from yes/no choice scoring.

use std::path::Path;

use spanlink_core::io::{self, LoadMode, Record, Task};
use spanlink_core::model::{CorefInstance, SrlInstance};
use spanlink_core::prompt::{
    generate_mention_pairs, pair_context, render_prompt, PromptRequest, QaPair, TemplateFamily,
};
use spanlink_core::scorer::{link_score, ScoreMode, Scorer};
use spanlink_core::{Error, Result};

use crate::commands::{map_ordered, open_output, report_diagnostics};
use crate::config::RunConfig;

pub fn run(config: &RunConfig, input: &Path, output: &Path) -> Result<()> {
    let family = config.require_template()?;
    let scorer = config.build_scorer()?;
    let mode = if config.lenient {
        LoadMode::Partial
    } else {
        LoadMode::Strict
    };
    let mut writer = open_output(output, config, None)?;
    match config.task {
        Task::Srl => {
            let loaded = io::load_srl_instances(input, mode, false)?;
            report_diagnostics(input, &loaded.diagnostics);
            let scored = map_ordered(config.jobs, loaded.items, |instance| {
                score_srl_instance(&instance, family, &scorer, config.top_n)
            })?;
            for instance in &scored {
                writer.write(&Record::SrlInstance(io::srl_instance_to_record(instance)))?;
            }
            eprintln!("scored {} srl instances", scored.len());
        }
        Task::Coref => {
            let loaded = io::load_coref_instances(input, mode)?;
            report_diagnostics(input, &loaded.diagnostics);
            let scored = map_ordered(config.jobs, loaded.items, |instance| {
                score_coref_instance(&instance, family, &scorer, config)
            })?;
            for instance in &scored {
                writer.write(&Record::CorefInstance(io::coref_instance_to_record(
                    instance,
                )))?;
            }
            eprintln!("scored {} coref documents", scored.len());
        }
    }
    writer.finish()
}

/// Scores every role of one instance. The iterative family runs
/// sequentially over roles, replaying each top-ranked answer.
pub fn score_srl_instance(
    instance: &SrlInstance,
    family: TemplateFamily,
    scorer: &Scorer,
    top_n: usize,
) -> Result<SrlInstance> {
    let context = instance.sentence_tokens.join(" ");
    let question_order: Vec<String> =
        instance.roles.iter().map(|r| r.question.clone()).collect();
    let mut scored = instance.clone();
    let mut priors: Vec<QaPair> = Vec::new();
    for role in scored.roles.iter_mut() {
        let request = PromptRequest {
            family: Some(family),
            question: Some(role.question.clone()),
            context: Some(context.clone()),
            priors: if family == TemplateFamily::FlanIterative {
                priors.clone()
            } else {
                Vec::new()
            },
            question_order: question_order.clone(),
            ..Default::default()
        };
        let prompt = render_prompt(&request)?;
        let candidates = scorer.score_candidates(&prompt, &ScoreMode::GenerateTopN { n: top_n })?;
        if family == TemplateFamily::FlanIterative {
            let answer = candidates
                .first()
                .map(|c| c.text.clone())
                .ok_or_else(|| {
                    Error::validation(format!(
                        "instance {}: backend returned no candidates for role {:?} \
                         (iterative scoring needs an answer to continue)",
                        instance.instance_id, role.role_id
                    ))
                })?;
            priors.push(QaPair {
                question: role.question.clone(),
                answer,
            });
        }
        role.candidates = candidates;
    }
    Ok(scored)
}

/// Scores every windowed mention pair of one document; the link score is
/// the yes/no score difference.
pub fn score_coref_instance(
    instance: &CorefInstance,
    family: TemplateFamily,
    scorer: &Scorer,
    config: &RunConfig,
) -> Result<CorefInstance> {
    let (yes, no) = family
        .yes_no_choices()
        .expect("coref families define yes/no choices");
    let choices = vec![yes.to_string(), no.to_string()];
    let mut pairs = Vec::new();
    for (i, j) in generate_mention_pairs(&instance.mentions, config.window) {
        let context = pair_context(instance, i, j, config.context_style)?;
        let request = PromptRequest {
            family: Some(family),
            context: Some(context),
            mention_pair: Some((
                instance.mentions[i].text.clone(),
                instance.mentions[j].text.clone(),
            )),
            ..Default::default()
        };
        let prompt = render_prompt(&request)?;
        let scored = scorer.score_candidates(
            &prompt,
            &ScoreMode::ScoreChoices {
                choices: choices.clone(),
            },
        )?;
        let score_of = |text: &str| {
            scored
                .iter()
                .find(|c| c.text == text)
                .map(|c| c.score)
                .ok_or_else(|| {
                    Error::validation(format!(
                        "backend response lacks choice {text:?} for document {}",
                        instance.document_id
                    ))
                })
        };
        let s = link_score(score_of(yes)?, score_of(no)?);
        pairs.push((
            instance.mentions[i].id.clone(),
            instance.mentions[j].id.clone(),
            s,
        ));
    }
    CorefInstance::new(
        instance.document_id.clone(),
        instance.sentences.clone(),
        instance.mentions.clone(),
        pairs,
    )
}
