//! End-to-end runs of the `spanlink` binary over the bundled fixtures:
//! pipeline correctness, exit codes, config-file merging, and lenient
//! loading.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn spanlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spanlink"))
        .args(args)
        .output()
        .expect("spawn spanlink")
}

fn path_str(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn srl_pipeline_reproduces_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let scored = dir.path().join("scored.jsonl");
    let structures = dir.path().join("structures.jsonl");
    let report = dir.path().join("report.json");

    let out = spanlink(&[
        "score",
        "--task", "srl",
        "--template", "t5-qa",
        "--backend", "file",
        "--backend-path", path_str(&fixture("srl_toy_scores.jsonl")),
        "--input", path_str(&fixture("srl_toy_unscored.jsonl")),
        "--output", path_str(&scored),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = spanlink(&[
        "infer",
        "--task", "srl",
        "--solver", "constrained",
        "--k", "20",
        "--input", path_str(&scored),
        "--output", path_str(&structures),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let content = std::fs::read_to_string(&structures).unwrap();
    let data_line = content.lines().nth(1).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(data_line).unwrap();
    assert_eq!(parsed["total_cost"], 1.0);
    let texts: Vec<&str> = parsed["assignments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["text"].as_str().unwrap())
        .collect();
    assert_eq!(texts, ["Elrond", "Aragorn", "the sword"]);
    // The manifest records zero inconsistency for the constrained run.
    let manifest: serde_json::Value =
        serde_json::from_str(content.lines().next().unwrap()).unwrap();
    assert_eq!(manifest["rho"]["rho_pair"], 0.0);
    assert_eq!(manifest["config"]["solver"], "constrained");

    let out = spanlink(&[
        "eval",
        "--task", "srl",
        "--pred", path_str(&structures),
        "--gold", path_str(&fixture("srl_toy_gold.jsonl")),
        "--report", path_str(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for key in ["exact_q", "exact_s", "head_q", "head_s"] {
        assert_eq!(report["metrics"][key], 100.0, "{key}");
    }
    assert_eq!(report["metrics"]["rho_pair"], 0.0);
}

#[test]
fn coref_pipeline_finds_expected_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let clusters = dir.path().join("clusters.jsonl");
    let report = dir.path().join("report.json");

    let out = spanlink(&[
        "infer",
        "--task", "coref",
        "--solver", "constrained",
        "--input", path_str(&fixture("coref_toy_scored.jsonl")),
        "--output", path_str(&clusters),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let content = std::fs::read_to_string(&clusters).unwrap();
    let parsed: serde_json::Value =
        serde_json::from_str(content.lines().nth(1).unwrap()).unwrap();
    assert_eq!(
        parsed["clusters"],
        serde_json::json!([["m0", "m2"], ["m1"], ["m3"]])
    );
    assert_eq!(parsed["objective"], 2.0);
    assert_eq!(parsed["optimal"], true);

    let out = spanlink(&[
        "eval",
        "--task", "coref",
        "--pred", path_str(&clusters),
        "--gold", path_str(&fixture("coref_toy_gold.jsonl")),
        "--report", path_str(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["metrics"]["conll"], 100.0);
    assert_eq!(report["metrics"]["pairwise_f1"], 100.0);
    assert_eq!(report["metrics"]["rho"], 0.0);
}

#[test]
fn decisions_only_eval_reports_null_cluster_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let decisions = dir.path().join("decisions.jsonl");
    let report = dir.path().join("report.json");
    assert!(spanlink(&[
        "infer",
        "--task", "coref",
        "--solver", "unconstrained",
        "--input", path_str(&fixture("coref_toy_scored.jsonl")),
        "--output", path_str(&decisions),
    ])
    .status
    .success());
    assert!(spanlink(&[
        "eval",
        "--task", "coref",
        "--pred", path_str(&decisions),
        "--gold", path_str(&fixture("coref_toy_gold.jsonl")),
        "--report", path_str(&report),
    ])
    .status
    .success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(report["metrics"]["conll"].is_null());
    assert!(report["metrics"]["muc_f1"].is_null());
    assert_eq!(report["metrics"]["pairwise_f1"], 100.0);
}

#[test]
fn exit_codes_by_failure_category() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.jsonl");

    // Validation: coref-only solver on SRL.
    let out = spanlink(&[
        "infer",
        "--task", "srl",
        "--solver", "r2l",
        "--input", path_str(&fixture("srl_toy_scored.jsonl")),
        "--output", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // IO: missing input file.
    let out = spanlink(&[
        "infer",
        "--task", "srl",
        "--solver", "constrained",
        "--input", path_str(&dir.path().join("missing.jsonl")),
        "--output", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // Parse: malformed line, strict by default, line number reported.
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{broken\n").unwrap();
    let out = spanlink(&[
        "infer",
        "--task", "srl",
        "--solver", "constrained",
        "--input", path_str(&bad),
        "--output", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":1:"));

    // Solver budget exhaustion.
    let out = spanlink(&[
        "infer",
        "--task", "coref",
        "--solver", "constrained",
        "--budget", "1",
        "--input", path_str(&fixture("coref_toy_scored.jsonl")),
        "--output", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(4));

    // Remote backend failure (nothing listens on this port).
    let out = spanlink(&[
        "score",
        "--task", "srl",
        "--template", "t5-qa",
        "--backend", "remote",
        "--endpoint", "http://127.0.0.1:9",
        "--max-retries", "0",
        "--timeout-ms", "300",
        "--backoff-ms", "1",
        "--input", path_str(&fixture("srl_toy_unscored.jsonl")),
        "--output", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn eval_misalignment_names_offenders() {
    let dir = tempfile::tempdir().unwrap();
    let structures = dir.path().join("structures.jsonl");
    assert!(spanlink(&[
        "infer",
        "--task", "srl",
        "--solver", "constrained",
        "--input", path_str(&fixture("srl_toy_scored.jsonl")),
        "--output", path_str(&structures),
    ])
    .status
    .success());
    let wrong_gold = dir.path().join("gold.jsonl");
    std::fs::write(
        &wrong_gold,
        r#"{"schema_version":1,"kind":"srl_gold","instance_id":"other-id","roles":[]}"#,
    )
    .unwrap();
    let out = spanlink(&[
        "eval",
        "--task", "srl",
        "--pred", path_str(&structures),
        "--gold", path_str(&wrong_gold),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("other-id") && stderr.contains("toy-1"), "{stderr}");
}

#[test]
fn config_file_supplies_flags_and_cli_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        serde_json::json!({
            "task": "srl",
            "solver": "constrained",
            "k": 5,
            "top-n": 7
        })
        .to_string(),
    )
    .unwrap();
    let output = dir.path().join("out.jsonl");
    let out = spanlink(&[
        "infer",
        "--config", path_str(&config),
        "--k", "9",
        "--input", path_str(&fixture("srl_toy_scored.jsonl")),
        "--output", path_str(&output),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value = serde_json::from_str(
        std::fs::read_to_string(&output).unwrap().lines().next().unwrap(),
    )
    .unwrap();
    // CLI flag wins over file; file fills the rest.
    assert_eq!(manifest["config"]["k"], 9);
    assert_eq!(manifest["config"]["top_n"], 7);
    assert_eq!(manifest["config"]["solver"], "constrained");

    // Unknown keys in the config file are rejected.
    std::fs::write(&config, r#"{"task": "srl", "no-such-flag": 1}"#).unwrap();
    let out = spanlink(&[
        "infer",
        "--config", path_str(&config),
        "--solver", "constrained",
        "--input", path_str(&fixture("srl_toy_scored.jsonl")),
        "--output", path_str(&output),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lenient_mode_skips_bad_lines_with_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("mixed.jsonl");
    let good = std::fs::read_to_string(fixture("srl_toy_scored.jsonl")).unwrap();
    let mut content = String::new();
    for _ in 0..2 {
        content.push_str(&good);
    }
    content.push_str("{broken json\n");
    for _ in 0..2 {
        content.push_str(&good);
    }
    std::fs::write(&input, content).unwrap();

    let output = dir.path().join("out.jsonl");
    let out = spanlink(&[
        "infer",
        "--task", "srl",
        "--solver", "constrained",
        "--lenient",
        "--input", path_str(&input),
        "--output", path_str(&output),
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning") && stderr.contains(":3:"), "{stderr}");
    let produced = std::fs::read_to_string(&output).unwrap();
    assert_eq!(produced.lines().count(), 5); // manifest + 4 structures
}

#[test]
fn prompts_command_emits_one_per_unit() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("prompts.jsonl");
    assert!(spanlink(&[
        "prompts",
        "--task", "srl",
        "--template", "t5-qa",
        "--input", path_str(&fixture("srl_toy_unscored.jsonl")),
        "--output", path_str(&output),
    ])
    .status
    .success());
    let content = std::fs::read_to_string(&output).unwrap();
    assert_eq!(content.lines().count(), 4); // manifest + 3 roles
    let first: serde_json::Value =
        serde_json::from_str(content.lines().nth(1).unwrap()).unwrap();
    assert_eq!(
        first["prompt"],
        "question: Who gave something? context: Elrond gave Aragorn the sword"
    );

    // Coreference: C(4,2) prompts with yes/no choices attached.
    let output = dir.path().join("coref_prompts.jsonl");
    assert!(spanlink(&[
        "prompts",
        "--task", "coref",
        "--template", "coref-flan",
        "--input", path_str(&fixture("coref_toy_unscored.jsonl")),
        "--output", path_str(&output),
    ])
    .status
    .success());
    let content = std::fs::read_to_string(&output).unwrap();
    assert_eq!(content.lines().count(), 7); // manifest + 6 pairs
}
