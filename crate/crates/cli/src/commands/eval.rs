//! `spanlink eval`: score predictions against gold, printing a human
//! table on standard output and optionally a machine-readable key-value
//! report (all values in percent).

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use spanlink_core::io::{self, CorefPrediction, LoadMode, Task};
use spanlink_core::metrics::{
    evaluate_coref, rho_srl, srl_eval, srl_report, CorefDocEval, CorefEvalReport, PrF1,
    SrlEvalReport, SurfaceHeadFinder,
};
use spanlink_core::{Error, Result};

use crate::commands::report_diagnostics;
use crate::config::RunConfig;

pub fn run(
    config: &RunConfig,
    pred_path: &Path,
    gold_path: &Path,
    report_path: Option<&Path>,
) -> Result<()> {
    let mode = if config.lenient {
        LoadMode::Partial
    } else {
        LoadMode::Strict
    };
    let report = match config.task {
        Task::Srl => {
            let report = eval_srl(pred_path, gold_path, mode)?;
            print_srl_table(&report);
            serde_json::json!({
                "task": "srl",
                "config": config.manifest_value(),
                "metrics": report,
            })
        }
        Task::Coref => {
            let report = eval_coref(pred_path, gold_path, mode)?;
            print_coref_table(&report);
            serde_json::json!({
                "task": "coref",
                "config": config.manifest_value(),
                "metrics": coref_metrics_json(&report),
                "flags": report.flags,
            })
        }
    };
    if let Some(path) = report_path {
        let mut text = serde_json::to_string_pretty(&report)
            .map_err(|e| Error::validation(format!("serializing report: {e}")))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        eprintln!("wrote machine report to {}", path.display());
    }
    Ok(())
}

fn eval_srl(pred_path: &Path, gold_path: &Path, mode: LoadMode) -> Result<SrlEvalReport> {
    let preds = io::load_srl_structures(pred_path, mode)?;
    report_diagnostics(pred_path, &preds.diagnostics);
    let golds = io::load_srl_gold(gold_path, mode)?;
    report_diagnostics(gold_path, &golds.diagnostics);
    let accuracy = srl_eval(&preds.items, &golds.items, &SurfaceHeadFinder)?;
    let structures: Vec<_> = preds.items.iter().map(|(_, s)| s.clone()).collect();
    let rho = rho_srl(&structures);
    Ok(srl_report(&accuracy, &rho))
}

fn eval_coref(pred_path: &Path, gold_path: &Path, mode: LoadMode) -> Result<CorefEvalReport> {
    let preds = io::load_coref_predictions(pred_path, mode)?;
    report_diagnostics(pred_path, &preds.diagnostics);
    let golds = io::load_coref_gold(gold_path, mode)?;
    report_diagnostics(gold_path, &golds.diagnostics);

    let pred_by_id: HashMap<&str, &CorefPrediction> = preds
        .items
        .iter()
        .map(|p| (p.document_id(), p))
        .collect();
    if pred_by_id.len() != preds.items.len() {
        return Err(Error::validation("duplicate document ids in predictions"));
    }
    let gold_ids: BTreeSet<&str> = golds.items.iter().map(|g| g.document_id.as_str()).collect();
    let missing: Vec<&str> = gold_ids
        .iter()
        .copied()
        .filter(|id| !pred_by_id.contains_key(id))
        .collect();
    let extra: Vec<&str> = preds
        .items
        .iter()
        .map(|p| p.document_id())
        .filter(|id| !gold_ids.contains(id))
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::validation(format!(
            "prediction/gold misalignment: missing predictions for {missing:?}, \
             predictions without gold for {extra:?}"
        )));
    }

    let docs: Vec<CorefDocEval> = golds
        .items
        .iter()
        .map(|gold| {
            let pred = pred_by_id[gold.document_id.as_str()];
            CorefDocEval {
                decisions: pred.decisions(),
                pred_clustering: pred.clustering(),
                gold: &gold.clustering,
            }
        })
        .collect();
    evaluate_coref(&docs)
}

fn print_srl_table(report: &SrlEvalReport) {
    println!("SRL evaluation ({} structures, {} questions)", report.structures, report.questions);
    println!("  {:<16} {:>8}", "metric", "value");
    println!("  {:<16} {:>7.2}%", "Exact_q", report.exact_q);
    println!("  {:<16} {:>7.2}%", "Exact_s", report.exact_s);
    println!("  {:<16} {:>7.2}%", "Head_q", report.head_q);
    println!("  {:<16} {:>7.2}%", "Head_s", report.head_s);
    println!(
        "  {:<16} {:>7.2}%  ({} of {} pairs)",
        "rho (pair)", report.rho_pair, report.violating_pairs, report.comparable_pairs
    );
    println!("  {:<16} {:>7.2}%", "rho (structure)", report.rho_structure);
}

fn fmt_prf1(value: Option<&PrF1>) -> String {
    match value {
        Some(p) => format!(
            "P {:>6.2}%  R {:>6.2}%  F1 {:>6.2}%",
            p.precision * 100.0,
            p.recall * 100.0,
            p.f1 * 100.0
        ),
        None => "N/A (decisions only)".to_string(),
    }
}

fn print_coref_table(report: &CorefEvalReport) {
    println!("Coreference evaluation ({} scored pairs)", report.scored_pairs);
    println!("  {:<10} {}", "pairwise", fmt_prf1(Some(&report.pairwise)));
    println!("  {:<10} {}", "MUC", fmt_prf1(report.muc.as_ref()));
    println!("  {:<10} {}", "B3", fmt_prf1(report.b_cubed.as_ref()));
    println!("  {:<10} {}", "CEAF_e", fmt_prf1(report.ceaf_e.as_ref()));
    match report.conll {
        Some(conll) => println!("  {:<10} {:>6.2}%", "CoNLL", conll),
        None => println!("  {:<10} N/A (decisions only)", "CoNLL"),
    }
    println!("  {:<10} {:>6.2}%", "rho", report.rho);
    if !report.flags.is_empty() {
        println!("  flags: {}", report.flags.join(", "));
    }
}

fn prf1_json(value: &Option<PrF1>, prefix: &str, out: &mut serde_json::Map<String, serde_json::Value>) {
    let (p, r, f1) = match value {
        Some(v) => (
            serde_json::json!(v.precision * 100.0),
            serde_json::json!(v.recall * 100.0),
            serde_json::json!(v.f1 * 100.0),
        ),
        None => (
            serde_json::Value::Null,
            serde_json::Value::Null,
            serde_json::Value::Null,
        ),
    };
    out.insert(format!("{prefix}_p"), p);
    out.insert(format!("{prefix}_r"), r);
    out.insert(format!("{prefix}_f1"), f1);
}

/// Flat key-value metrics, all in percent. Keys: pairwise_p/_r/_f1,
/// muc_*, b3_*, ceafe_*, conll, rho, scored_pairs.
fn coref_metrics_json(report: &CorefEvalReport) -> serde_json::Value {
    let mut out = serde_json::Map::new();
    prf1_json(&Some(report.pairwise), "pairwise", &mut out);
    prf1_json(&report.muc, "muc", &mut out);
    prf1_json(&report.b_cubed, "b3", &mut out);
    prf1_json(&report.ceaf_e, "ceafe", &mut out);
    out.insert(
        "conll".into(),
        report.conll.map_or(serde_json::Value::Null, |c| serde_json::json!(c)),
    );
    out.insert("rho".into(), serde_json::json!(report.rho));
    out.insert("scored_pairs".into(), serde_json::json!(report.scored_pairs));
    serde_json::Value::Object(out)
}
