//! JSONL file formats and their loaders/writers.
//!
//! Every line is a standalone JSON object carrying `schema_version` and a
//! `kind` tag. A file may start with a `manifest` line reproducing the run
//! configuration; loaders skip manifests transparently, so outputs are
//! valid inputs. Loading is streaming and line-addressed: strict mode
//! fails on the first bad line naming it, partial mode collects
//! line-numbered diagnostics and keeps going.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{
    Clustering, CorefGold, CorefInstance, GoldRole, LinkDecisionSet, Mention, Role,
    ScoredCandidate, SpanAssignment, SrlGold, SrlInstance, SrlStructure, TokenSpan,
};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Which task a file or run is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Srl,
    Coref,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Task::Srl => write!(f, "srl"),
            Task::Coref => write!(f, "coref"),
        }
    }
}

/// One JSONL line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Manifest(ManifestRecord),
    SrlInstance(SrlInstanceRecord),
    CorefInstance(CorefInstanceRecord),
    SrlGold(SrlGoldRecord),
    CorefGold(CorefGoldRecord),
    SrlStructure(SrlStructureRecord),
    CorefClustering(CorefClusteringRecord),
    CorefDecisions(CorefDecisionsRecord),
    Prompt(PromptRecord),
    ScoreStore(ScoreStoreRecord),
}

impl Record {
    fn kind_name(&self) -> &'static str {
        match self {
            Record::Manifest(_) => "manifest",
            Record::SrlInstance(_) => "srl_instance",
            Record::CorefInstance(_) => "coref_instance",
            Record::SrlGold(_) => "srl_gold",
            Record::CorefGold(_) => "coref_gold",
            Record::SrlStructure(_) => "srl_structure",
            Record::CorefClustering(_) => "coref_clustering",
            Record::CorefDecisions(_) => "coref_decisions",
            Record::Prompt(_) => "prompt",
            Record::ScoreStore(_) => "score_store",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Line {
    schema_version: u32,
    #[serde(flatten)]
    record: Record,
}

/// Run provenance: the full resolved configuration, plus the measured
/// inconsistency of the written predictions for inference runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub text: String,
    pub score: f64,
    pub rank: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleRecord {
    pub role_id: String,
    pub question: String,
    #[serde(default)]
    pub candidates: Vec<CandidateRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrlInstanceRecord {
    pub instance_id: String,
    pub sentence_tokens: Vec<String>,
    pub predicate_index: usize,
    pub roles: Vec<RoleRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionRecord {
    pub id: String,
    pub text: String,
    pub sentence_index: usize,
    pub token_start: usize,
    pub token_end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScoreRecord {
    pub m1: String,
    pub m2: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorefInstanceRecord {
    pub document_id: String,
    #[serde(default)]
    pub sentences: Vec<String>,
    pub mentions: Vec<MentionRecord>,
    #[serde(default)]
    pub pair_scores: Vec<PairScoreRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldRoleRecord {
    pub role_id: String,
    pub answers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrlGoldRecord {
    pub instance_id: String,
    pub roles: Vec<GoldRoleRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorefGoldRecord {
    pub document_id: String,
    pub clusters: Vec<Vec<String>>,
}

/// One role assignment; `text`/`start`/`end` are either all present or all
/// absent (unassigned role).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub role_id: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub end: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrlStructureRecord {
    pub instance_id: String,
    pub assignments: Vec<AssignmentRecord>,
    pub total_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub m1: String,
    pub m2: String,
    pub y: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorefClusteringRecord {
    pub document_id: String,
    pub clusters: Vec<Vec<String>>,
    /// Decisions induced on the scored pairs, so evaluation needs no
    /// access to the original instance.
    pub decisions: Vec<DecisionRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorefDecisionsRecord {
    pub document_id: String,
    pub decisions: Vec<DecisionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub task: Task,
    pub instance_id: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub role_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mention_pair: Option<(String, String)>,
    pub family: String,
    pub prompt: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub choices: Vec<String>,
    /// True when the prompt is only the first step of an iterative flow
    /// whose later prompts depend on earlier answers.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub staged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredScore {
    pub text: String,
    pub log_score: f64,
}

/// One prompt's stored scoring response; the file-backed scorer and the
/// score cache both use this shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreStoreRecord {
    pub prompt: String,
    pub candidates: Vec<StoredScore>,
}

/// Whether loading stops at the first bad line or collects diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadMode {
    #[default]
    Strict,
    Partial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineDiagnostic {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Loaded<T> {
    pub items: Vec<T>,
    pub diagnostics: Vec<LineDiagnostic>,
    /// Manifest headers encountered, in order.
    pub manifests: Vec<ManifestRecord>,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Streams records through `convert`, which may reject a record (error),
/// skip it (`Ok(None)`), or produce an item. Manifest lines are collected
/// separately and never passed to `convert`.
fn load_with<T>(
    path: &Path,
    mode: LoadMode,
    mut convert: impl FnMut(Record) -> std::result::Result<Option<T>, String>,
) -> Result<Loaded<T>> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut loaded = Loaded {
        items: Vec::new(),
        diagnostics: Vec::new(),
        manifests: Vec::new(),
    };
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let outcome = parse_line(&line).and_then(|record| match record {
            Record::Manifest(m) => {
                loaded.manifests.push(m);
                Ok(None)
            }
            other => convert(other),
        });
        match outcome {
            Ok(Some(item)) => loaded.items.push(item),
            Ok(None) => {}
            Err(message) => match mode {
                LoadMode::Strict => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: line_no,
                        message,
                    })
                }
                LoadMode::Partial => loaded.diagnostics.push(LineDiagnostic {
                    line: line_no,
                    message,
                }),
            },
        }
    }
    Ok(loaded)
}

fn parse_line(line: &str) -> std::result::Result<Record, String> {
    let parsed: Line = serde_json::from_str(line).map_err(|e| e.to_string())?;
    if parsed.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            parsed.schema_version
        ));
    }
    Ok(parsed.record)
}

fn wrong_kind<T>(record: &Record, expected: &str) -> std::result::Result<Option<T>, String> {
    Err(format!(
        "unexpected record kind {:?} (expected {expected})",
        record.kind_name()
    ))
}

/// Loads SRL instances. With `require_scored`, every role must carry a
/// well-formed candidate list (the form `infer` consumes); without it,
/// unscored instances are accepted (the form `prompts`/`score` consume).
pub fn load_srl_instances(
    path: &Path,
    mode: LoadMode,
    require_scored: bool,
) -> Result<Loaded<SrlInstance>> {
    load_with(path, mode, |record| match record {
        Record::SrlInstance(r) => srl_instance_from_record(r, require_scored).map(Some),
        other => wrong_kind(&other, "srl_instance"),
    })
}

fn srl_instance_from_record(
    record: SrlInstanceRecord,
    require_scored: bool,
) -> std::result::Result<SrlInstance, String> {
    let mut roles = Vec::with_capacity(record.roles.len());
    for role in record.roles {
        let mut candidates: Vec<ScoredCandidate> = role
            .candidates
            .into_iter()
            .map(|c| ScoredCandidate {
                text: c.text,
                score: c.score,
                rank: c.rank,
            })
            .collect();
        candidates.sort_by_key(|c| c.rank);
        roles.push(Role {
            role_id: role.role_id,
            question: role.question,
            candidates,
        });
    }
    let instance = SrlInstance {
        instance_id: record.instance_id,
        sentence_tokens: record.sentence_tokens,
        predicate_index: record.predicate_index,
        roles,
    };
    instance
        .validate(require_scored)
        .map_err(|e| e.to_string())?;
    Ok(instance)
}

pub fn srl_instance_to_record(instance: &SrlInstance) -> SrlInstanceRecord {
    SrlInstanceRecord {
        instance_id: instance.instance_id.clone(),
        sentence_tokens: instance.sentence_tokens.clone(),
        predicate_index: instance.predicate_index,
        roles: instance
            .roles
            .iter()
            .map(|r| RoleRecord {
                role_id: r.role_id.clone(),
                question: r.question.clone(),
                candidates: r
                    .candidates
                    .iter()
                    .map(|c| CandidateRecord {
                        text: c.text.clone(),
                        score: c.score,
                        rank: c.rank,
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn load_coref_instances(path: &Path, mode: LoadMode) -> Result<Loaded<CorefInstance>> {
    load_with(path, mode, |record| match record {
        Record::CorefInstance(r) => coref_instance_from_record(r).map(Some),
        other => wrong_kind(&other, "coref_instance"),
    })
}

fn coref_instance_from_record(
    record: CorefInstanceRecord,
) -> std::result::Result<CorefInstance, String> {
    let mentions = record
        .mentions
        .into_iter()
        .map(|m| Mention {
            id: m.id,
            text: m.text,
            sentence_index: m.sentence_index,
            token_start: m.token_start,
            token_end: m.token_end,
        })
        .collect();
    CorefInstance::new(
        record.document_id,
        record.sentences,
        mentions,
        record
            .pair_scores
            .into_iter()
            .map(|p| (p.m1, p.m2, p.score))
            .collect(),
    )
    .map_err(|e| e.to_string())
}

pub fn coref_instance_to_record(instance: &CorefInstance) -> CorefInstanceRecord {
    CorefInstanceRecord {
        document_id: instance.document_id.clone(),
        sentences: instance.sentences.clone(),
        mentions: instance
            .mentions
            .iter()
            .map(|m| MentionRecord {
                id: m.id.clone(),
                text: m.text.clone(),
                sentence_index: m.sentence_index,
                token_start: m.token_start,
                token_end: m.token_end,
            })
            .collect(),
        pair_scores: instance
            .scored_pairs()
            .map(|((i, j), score)| PairScoreRecord {
                m1: instance.mentions[i].id.clone(),
                m2: instance.mentions[j].id.clone(),
                score,
            })
            .collect(),
    }
}

pub fn load_srl_gold(path: &Path, mode: LoadMode) -> Result<Loaded<SrlGold>> {
    load_with(path, mode, |record| match record {
        Record::SrlGold(r) => Ok(Some(SrlGold {
            instance_id: r.instance_id,
            roles: r
                .roles
                .into_iter()
                .map(|g| GoldRole {
                    role_id: g.role_id,
                    answers: g.answers,
                })
                .collect(),
        })),
        other => wrong_kind(&other, "srl_gold"),
    })
}

pub fn load_coref_gold(path: &Path, mode: LoadMode) -> Result<Loaded<CorefGold>> {
    load_with(path, mode, |record| match record {
        Record::CorefGold(r) => Clustering::new(r.clusters)
            .map(|clustering| {
                Some(CorefGold {
                    document_id: r.document_id,
                    clustering,
                })
            })
            .map_err(|e| e.to_string()),
        other => wrong_kind(&other, "coref_gold"),
    })
}

pub fn load_srl_structures(path: &Path, mode: LoadMode) -> Result<Loaded<(String, SrlStructure)>> {
    load_with(path, mode, |record| match record {
        Record::SrlStructure(r) => srl_structure_from_record(r).map(Some),
        other => wrong_kind(&other, "srl_structure"),
    })
}

fn srl_structure_from_record(
    record: SrlStructureRecord,
) -> std::result::Result<(String, SrlStructure), String> {
    let mut assignments = std::collections::BTreeMap::new();
    for a in record.assignments {
        let value = match (a.text, a.start, a.end) {
            (Some(text), Some(start), Some(end)) => {
                let span = TokenSpan::try_new(start, end).map_err(|e| e.to_string())?;
                Some(SpanAssignment { span, text })
            }
            (None, None, None) => None,
            _ => {
                return Err(format!(
                    "role {:?}: text/start/end must be all present or all absent",
                    a.role_id
                ))
            }
        };
        if assignments.insert(a.role_id.clone(), value).is_some() {
            return Err(format!("duplicate role {:?} in structure", a.role_id));
        }
    }
    Ok((
        record.instance_id,
        SrlStructure {
            assignments,
            total_cost: record.total_cost,
        },
    ))
}

pub fn srl_structure_to_record(instance_id: &str, structure: &SrlStructure) -> SrlStructureRecord {
    SrlStructureRecord {
        instance_id: instance_id.to_string(),
        assignments: structure
            .assignments
            .iter()
            .map(|(role_id, a)| AssignmentRecord {
                role_id: role_id.clone(),
                text: a.as_ref().map(|x| x.text.clone()),
                start: a.as_ref().map(|x| x.span.start),
                end: a.as_ref().map(|x| x.span.end),
            })
            .collect(),
        total_cost: structure.total_cost,
    }
}

/// A coreference prediction is either a full clustering (with its induced
/// decisions) or raw decisions from an unconstrained run.
#[derive(Debug, Clone, PartialEq)]
pub enum CorefPrediction {
    Clustering {
        document_id: String,
        clustering: Clustering,
        decisions: LinkDecisionSet,
        objective: Option<f64>,
        optimal: Option<bool>,
    },
    Decisions {
        document_id: String,
        decisions: LinkDecisionSet,
    },
}

impl CorefPrediction {
    pub fn document_id(&self) -> &str {
        match self {
            CorefPrediction::Clustering { document_id, .. } => document_id,
            CorefPrediction::Decisions { document_id, .. } => document_id,
        }
    }

    pub fn decisions(&self) -> &LinkDecisionSet {
        match self {
            CorefPrediction::Clustering { decisions, .. } => decisions,
            CorefPrediction::Decisions { decisions, .. } => decisions,
        }
    }

    pub fn clustering(&self) -> Option<&Clustering> {
        match self {
            CorefPrediction::Clustering { clustering, .. } => Some(clustering),
            CorefPrediction::Decisions { .. } => None,
        }
    }
}

fn decisions_from_records(records: Vec<DecisionRecord>) -> LinkDecisionSet {
    let mut set = LinkDecisionSet::new();
    for d in records {
        set.insert(d.m1, d.m2, d.y != 0);
    }
    set
}

pub fn decisions_to_records(decisions: &LinkDecisionSet) -> Vec<DecisionRecord> {
    decisions
        .iter()
        .map(|(a, b, y)| DecisionRecord {
            m1: a.to_string(),
            m2: b.to_string(),
            y: y as u8,
        })
        .collect()
}

/// Loads clustering or decision predictions (both kinds may not be mixed
/// in one evaluation; the caller checks homogeneity).
pub fn load_coref_predictions(path: &Path, mode: LoadMode) -> Result<Loaded<CorefPrediction>> {
    load_with(path, mode, |record| match record {
        Record::CorefClustering(r) => Clustering::new(r.clusters)
            .map(|clustering| {
                Some(CorefPrediction::Clustering {
                    document_id: r.document_id,
                    clustering,
                    decisions: decisions_from_records(r.decisions),
                    objective: r.objective,
                    optimal: r.optimal,
                })
            })
            .map_err(|e| e.to_string()),
        Record::CorefDecisions(r) => Ok(Some(CorefPrediction::Decisions {
            document_id: r.document_id,
            decisions: decisions_from_records(r.decisions),
        })),
        other => wrong_kind(&other, "coref_clustering or coref_decisions"),
    })
}

pub fn load_prompts(path: &Path, mode: LoadMode) -> Result<Loaded<PromptRecord>> {
    load_with(path, mode, |record| match record {
        Record::Prompt(r) => Ok(Some(r)),
        other => wrong_kind(&other, "prompt"),
    })
}

pub fn load_score_store(path: &Path, mode: LoadMode) -> Result<Loaded<ScoreStoreRecord>> {
    load_with(path, mode, |record| match record {
        Record::ScoreStore(r) => Ok(Some(r)),
        other => wrong_kind(&other, "score_store"),
    })
}

/// Buffered JSONL writer stamping each record with the schema version.
pub struct JsonlWriter {
    path: PathBuf,
    inner: BufWriter<File>,
}

impl JsonlWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        Ok(JsonlWriter {
            path: path.to_path_buf(),
            inner: BufWriter::new(file),
        })
    }

    pub fn write(&mut self, record: &Record) -> Result<()> {
        let line = Line {
            schema_version: SCHEMA_VERSION,
            record: record.clone(),
        };
        serde_json::to_writer(&mut self.inner, &line)
            .map_err(|e| io_err(&self.path, e.into()))?;
        self.inner
            .write_all(b"\n")
            .map_err(|e| io_err(&self.path, e))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(|e| io_err(&self.path, e))
    }
}

/// Writes records to a fresh file, one per line.
pub fn write_records<'a>(
    path: &Path,
    records: impl IntoIterator<Item = &'a Record>,
) -> Result<()> {
    let mut writer = JsonlWriter::create(path)?;
    for record in records {
        writer.write(record)?;
    }
    writer.finish()
}
