//! `spanlink infer`: produce structures or clusterings from scored
//! instances. Constrained runs measure and record their own inconsistency
//! in the manifest, which is zero by construction.

use std::path::Path;

use spanlink_core::coref::{
    all_link_solve, baseline_all_no, baseline_all_yes, clustering_objective, induced_decisions,
    r2l_assign, unconstrained_decisions, SolverBudget,
};
use spanlink_core::io::{self, LoadMode, Record, Task};
use spanlink_core::metrics::{rho_coref_counts, rho_srl, RhoCorefCounts};
use spanlink_core::model::LinkDecisionSet;
use spanlink_core::srl::{infer_srl, unconstrained_srl, InferOptions, MatchOptions};
use spanlink_core::{Error, Result};

use crate::commands::{map_ordered, open_output, report_diagnostics};
use crate::config::{RunConfig, SolverKind};

pub fn run(config: &RunConfig, input: &Path, output: &Path) -> Result<()> {
    let solver = config.require_solver()?;
    let mode = if config.lenient {
        LoadMode::Partial
    } else {
        LoadMode::Strict
    };
    match config.task {
        Task::Srl => run_srl(config, solver, input, output, mode),
        Task::Coref => run_coref(config, solver, input, output, mode),
    }
}

fn run_srl(
    config: &RunConfig,
    solver: SolverKind,
    input: &Path,
    output: &Path,
    mode: LoadMode,
) -> Result<()> {
    let loaded = io::load_srl_instances(input, mode, true)?;
    report_diagnostics(input, &loaded.diagnostics);
    let match_options = MatchOptions {
        case_insensitive: config.case_insensitive,
        strict: config.strict,
    };
    let options = InferOptions {
        k: config.k,
        top_n: config.top_n,
        match_options: match_options.clone(),
    };
    let results = map_ordered(config.jobs, loaded.items, |instance| {
        let structure = match solver {
            SolverKind::Constrained => infer_srl(&instance, &options)?,
            SolverKind::Unconstrained => unconstrained_srl(&instance, &match_options)?,
            other => {
                return Err(Error::validation(format!(
                    "solver {} cannot run on SRL instances",
                    other.name()
                )))
            }
        };
        Ok((instance.instance_id, structure))
    })?;

    let rho = rho_srl(
        &results
            .iter()
            .map(|(_, s)| s.clone())
            .collect::<Vec<_>>(),
    );
    let rho_value = serde_json::json!({
        "rho_pair": rho.rho_pair(),
        "rho_structure": rho.rho_structure(),
    });
    let mut writer = open_output(output, config, Some(rho_value))?;
    for (instance_id, structure) in &results {
        writer.write(&Record::SrlStructure(io::srl_structure_to_record(
            instance_id,
            structure,
        )))?;
    }
    writer.finish()?;
    eprintln!(
        "inferred {} structures (rho_pair {:.2}%, rho_structure {:.2}%)",
        results.len(),
        rho.rho_pair(),
        rho.rho_structure()
    );
    Ok(())
}

enum CorefOutput {
    Clustering(io::CorefClusteringRecord, LinkDecisionSet),
    Decisions(io::CorefDecisionsRecord, LinkDecisionSet),
}

fn run_coref(
    config: &RunConfig,
    solver: SolverKind,
    input: &Path,
    output: &Path,
    mode: LoadMode,
) -> Result<()> {
    let loaded = io::load_coref_instances(input, mode)?;
    report_diagnostics(input, &loaded.diagnostics);
    let budget = SolverBudget {
        max_nodes: config.budget,
    };
    let results = map_ordered(config.jobs, loaded.items, |instance| {
        let output = match solver {
            SolverKind::Constrained => {
                let (clustering, report) = all_link_solve(&instance, &budget)?;
                if !report.optimal {
                    return Err(Error::SolverBudget {
                        nodes: report.nodes_expanded,
                        limit: budget.max_nodes,
                    });
                }
                let decisions = induced_decisions(&instance, &clustering);
                CorefOutput::Clustering(
                    io::CorefClusteringRecord {
                        document_id: instance.document_id.clone(),
                        clusters: clustering.clusters().to_vec(),
                        decisions: io::decisions_to_records(&decisions),
                        objective: Some(report.objective),
                        optimal: Some(report.optimal),
                    },
                    decisions,
                )
            }
            SolverKind::R2l => {
                let raw = unconstrained_decisions(&instance);
                let clustering = r2l_assign(&instance, &raw);
                let decisions = induced_decisions(&instance, &clustering);
                CorefOutput::Clustering(
                    io::CorefClusteringRecord {
                        document_id: instance.document_id.clone(),
                        clusters: clustering.clusters().to_vec(),
                        decisions: io::decisions_to_records(&decisions),
                        objective: Some(clustering_objective(&instance, &clustering)),
                        optimal: None,
                    },
                    decisions,
                )
            }
            SolverKind::AllYes | SolverKind::AllNo => {
                let clustering = if solver == SolverKind::AllYes {
                    baseline_all_yes(&instance)
                } else {
                    baseline_all_no(&instance)
                };
                let decisions = induced_decisions(&instance, &clustering);
                CorefOutput::Clustering(
                    io::CorefClusteringRecord {
                        document_id: instance.document_id.clone(),
                        clusters: clustering.clusters().to_vec(),
                        decisions: io::decisions_to_records(&decisions),
                        objective: Some(clustering_objective(&instance, &clustering)),
                        optimal: None,
                    },
                    decisions,
                )
            }
            SolverKind::Unconstrained => {
                let decisions = unconstrained_decisions(&instance);
                CorefOutput::Decisions(
                    io::CorefDecisionsRecord {
                        document_id: instance.document_id.clone(),
                        decisions: io::decisions_to_records(&decisions),
                    },
                    decisions,
                )
            }
        };
        Ok(output)
    })?;

    let mut rho = RhoCorefCounts::default();
    for result in &results {
        let decisions = match result {
            CorefOutput::Clustering(_, d) => d,
            CorefOutput::Decisions(_, d) => d,
        };
        rho.add(&rho_coref_counts(decisions));
    }
    let rho_value = serde_json::json!({ "rho": rho.rho() });
    let mut writer = open_output(output, config, Some(rho_value))?;
    let count = results.len();
    for result in results {
        match result {
            CorefOutput::Clustering(record, _) => {
                writer.write(&Record::CorefClustering(record))?
            }
            CorefOutput::Decisions(record, _) => writer.write(&Record::CorefDecisions(record))?,
        }
    }
    writer.finish()?;
    eprintln!(
        "inferred {} documents with solver {} (rho {:.2}%)",
        count,
        solver.name(),
        rho.rho()
    );
    Ok(())
}
