//! `spanlink prompts`: render one prompt per question (SRL) or mention
//! pair (coreference), ready for any backend.

use std::path::Path;

use spanlink_core::io::{self, LoadMode, PromptRecord, Record, Task};
use spanlink_core::model::{CorefInstance, SrlInstance};
use spanlink_core::prompt::{
    generate_mention_pairs, pair_context, render_prompt, PromptRequest, QaPair, TemplateFamily,
};
use spanlink_core::Result;

use crate::config::RunConfig;
use crate::commands::{open_output, report_diagnostics};

/// Placeholder inserted where an earlier answer would appear in a staged
/// iterative prompt; the scoring pass substitutes the real answer.
pub fn answer_placeholder(role_id: &str) -> String {
    format!("{{answer:{role_id}}}")
}

pub fn run(config: &RunConfig, input: &Path, output: &Path) -> Result<()> {
    let family = config.require_template()?;
    let mode = if config.lenient {
        LoadMode::Partial
    } else {
        LoadMode::Strict
    };
    let mut writer = open_output(output, config, None)?;
    let mut count = 0usize;
    match config.task {
        Task::Srl => {
            let loaded = io::load_srl_instances(input, mode, false)?;
            report_diagnostics(input, &loaded.diagnostics);
            for instance in &loaded.items {
                for record in srl_prompts(instance, family)? {
                    writer.write(&Record::Prompt(record))?;
                    count += 1;
                }
            }
        }
        Task::Coref => {
            let loaded = io::load_coref_instances(input, mode)?;
            report_diagnostics(input, &loaded.diagnostics);
            for instance in &loaded.items {
                for record in coref_prompts(instance, family, config)? {
                    writer.write(&Record::Prompt(record))?;
                    count += 1;
                }
            }
        }
    }
    writer.finish()?;
    eprintln!("wrote {count} prompts to {}", output.display());
    Ok(())
}

/// One prompt per role. Iterative prompts past the first question carry
/// `{answer:<role>}` placeholders for the staged scoring pass to fill.
pub fn srl_prompts(instance: &SrlInstance, family: TemplateFamily) -> Result<Vec<PromptRecord>> {
    let context = instance.sentence_tokens.join(" ");
    let question_order: Vec<String> =
        instance.roles.iter().map(|r| r.question.clone()).collect();
    let mut records = Vec::with_capacity(instance.roles.len());
    for (index, role) in instance.roles.iter().enumerate() {
        let request = PromptRequest {
            family: Some(family),
            question: Some(role.question.clone()),
            context: Some(context.clone()),
            priors: if family == TemplateFamily::FlanIterative {
                instance.roles[..index]
                    .iter()
                    .map(|prior| QaPair {
                        question: prior.question.clone(),
                        answer: answer_placeholder(&prior.role_id),
                    })
                    .collect()
            } else {
                Vec::new()
            },
            question_order: question_order.clone(),
            ..Default::default()
        };
        records.push(PromptRecord {
            task: Task::Srl,
            instance_id: instance.instance_id.clone(),
            role_id: Some(role.role_id.clone()),
            mention_pair: None,
            family: family.name().to_string(),
            prompt: render_prompt(&request)?,
            choices: Vec::new(),
            staged: family == TemplateFamily::FlanIterative && index > 0,
        });
    }
    Ok(records)
}

/// One prompt per windowed mention pair, with the family's yes/no choice
/// strings attached for choice-restricted scoring.
pub fn coref_prompts(
    instance: &CorefInstance,
    family: TemplateFamily,
    config: &RunConfig,
) -> Result<Vec<PromptRecord>> {
    let pairs = generate_mention_pairs(&instance.mentions, config.window);
    let (yes, no) = family
        .yes_no_choices()
        .expect("coref families define yes/no choices");
    let mut records = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
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
        records.push(PromptRecord {
            task: Task::Coref,
            instance_id: instance.document_id.clone(),
            role_id: None,
            mention_pair: Some((instance.mentions[i].id.clone(), instance.mentions[j].id.clone())),
            family: family.name().to_string(),
            prompt: render_prompt(&request)?,
            choices: vec![yes.to_string(), no.to_string()],
            staged: false,
        });
    }
    Ok(records)
}
