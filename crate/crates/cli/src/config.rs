//! Run configuration: CLI flags merged over an optional JSON config file
//! mirroring them, resolved into one struct that is serialized into every
//! output manifest for provenance.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::Args;
use serde::{Deserialize, Serialize};

use spanlink_core::io::Task;
use spanlink_core::prompt::{ContextStyle, TemplateFamily};
use spanlink_core::scorer::{
    FileBackend, MockBackend, RemoteBackend, RemoteConfig, ScoreCache, Scorer, ScorerBackend,
};
use spanlink_core::{Error, Result};

/// Which inference procedure to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    /// Structurally consistent output (K-shortest-paths / All-Link).
    Constrained,
    /// Raw per-decision argmax; structures may be inconsistent.
    Unconstrained,
    /// Right-to-left cluster assignment heuristic (coreference only).
    R2l,
    /// Single-cluster baseline (coreference only).
    AllYes,
    /// All-singletons baseline (coreference only).
    AllNo,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Constrained => "constrained",
            SolverKind::Unconstrained => "unconstrained",
            SolverKind::R2l => "r2l",
            SolverKind::AllYes => "all-yes",
            SolverKind::AllNo => "all-no",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Mock,
    File,
    Remote,
}

/// Flags shared by the subcommands. Everything is optional here so the
/// JSON config file can supply values; resolution applies defaults last.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Task: srl or coref.
    #[arg(long, value_parser = parse_task)]
    pub task: Option<Task>,

    /// Inference procedure (infer only).
    #[arg(long, value_enum)]
    pub solver: Option<SolverKind>,

    /// Shortest paths to enumerate (SRL inference).
    #[arg(long)]
    pub k: Option<usize>,

    /// Candidates per role / generations per prompt.
    #[arg(long = "top-n")]
    pub top_n: Option<usize>,

    /// Sentence window for mention-pair generation; omit for all pairs.
    #[arg(long)]
    pub window: Option<usize>,

    /// Prompt template family.
    #[arg(long, value_parser = TemplateFamily::parse)]
    pub template: Option<TemplateFamily>,

    /// Context style for coreference prompts: rel, hlght, full, full-hlght.
    #[arg(long = "context-style", value_parser = ContextStyle::parse)]
    pub context_style: Option<ContextStyle>,

    /// Scoring backend: mock, file, or remote.
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,

    /// Score-store path for the file backend.
    #[arg(long = "backend-path")]
    pub backend_path: Option<PathBuf>,

    /// Remote scoring endpoint URL.
    #[arg(long)]
    pub endpoint: Option<String>,

    /// Environment variable holding the remote auth token.
    #[arg(long = "auth-env")]
    pub auth_env: Option<String>,

    /// Remote request timeout in milliseconds.
    #[arg(long = "timeout-ms")]
    pub timeout_ms: Option<u64>,

    /// Remote retries after the first attempt.
    #[arg(long = "max-retries")]
    pub max_retries: Option<u32>,

    /// Base backoff between remote retries, in milliseconds.
    #[arg(long = "backoff-ms")]
    pub backoff_ms: Option<u64>,

    /// Maximum simultaneous remote requests.
    #[arg(long = "max-in-flight")]
    pub max_in_flight: Option<usize>,

    /// Score-cache file; reused across runs.
    #[arg(long)]
    pub cache: Option<PathBuf>,

    /// Seed mixed into the mock backend's hashing.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Fail on roles whose candidates cannot be located in the sentence.
    #[arg(long)]
    pub strict: bool,

    /// Retry candidate location case-insensitively.
    #[arg(long = "case-insensitive")]
    pub case_insensitive: bool,

    /// Branch-and-bound node budget for the exact coreference solver.
    #[arg(long)]
    pub budget: Option<u64>,

    /// Worker threads for per-instance parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Keep going past malformed input lines, reporting them as warnings.
    #[arg(long)]
    pub lenient: bool,
}

fn parse_task(s: &str) -> std::result::Result<Task, String> {
    match s {
        "srl" => Ok(Task::Srl),
        "coref" => Ok(Task::Coref),
        _ => Err(format!("unknown task {s:?}; expected srl or coref")),
    }
}

/// JSON config file mirroring the flags (kebab-case keys).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub task: Option<Task>,
    pub solver: Option<SolverKind>,
    pub k: Option<usize>,
    pub top_n: Option<usize>,
    pub window: Option<usize>,
    pub template: Option<String>,
    pub context_style: Option<String>,
    pub backend: Option<BackendKind>,
    pub backend_path: Option<PathBuf>,
    pub endpoint: Option<String>,
    pub auth_env: Option<String>,
    pub timeout_ms: Option<u64>,
    pub max_retries: Option<u32>,
    pub backoff_ms: Option<u64>,
    pub max_in_flight: Option<usize>,
    pub cache: Option<PathBuf>,
    pub seed: Option<u64>,
    pub strict: Option<bool>,
    pub case_insensitive: Option<bool>,
    pub budget: Option<u64>,
    pub jobs: Option<usize>,
    pub lenient: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// The fully resolved configuration of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub task: Task,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<&'static str>,
    pub k: usize,
    pub top_n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub template: Option<&'static str>,
    pub context_style: ContextStyle,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<BackendKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auth_env: Option<String>,
    pub timeout_ms: u64,
    pub max_retries: u32,
    pub backoff_ms: u64,
    pub max_in_flight: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
    pub seed: u64,
    pub strict: bool,
    pub case_insensitive: bool,
    pub budget: u64,
    pub jobs: usize,
    pub lenient: bool,
    #[serde(skip)]
    pub solver_kind: Option<SolverKind>,
    #[serde(skip)]
    pub template_family: Option<TemplateFamily>,
}

impl RunConfig {
    /// Merges CLI flags over the config file over defaults.
    pub fn resolve(args: &CommonArgs, file: &ConfigFile) -> Result<RunConfig> {
        let task = args
            .task
            .or(file.task)
            .ok_or_else(|| Error::validation("--task is required (srl or coref)"))?;
        let template_family = match (&args.template, &file.template) {
            (Some(t), _) => Some(*t),
            (None, Some(name)) => Some(TemplateFamily::parse(name)?),
            (None, None) => None,
        };
        let context_style = match (&args.context_style, &file.context_style) {
            (Some(s), _) => *s,
            (None, Some(name)) => ContextStyle::parse(name)?,
            (None, None) => ContextStyle::Relevant,
        };
        let solver_kind = args.solver.or(file.solver);
        let config = RunConfig {
            task,
            solver: solver_kind.map(|s| s.name()),
            k: args.k.or(file.k).unwrap_or(20),
            top_n: args.top_n.or(file.top_n).unwrap_or(20),
            window: args.window.or(file.window),
            template: template_family.map(|f| f.name()),
            context_style,
            backend: args.backend.or(file.backend),
            backend_path: args.backend_path.clone().or_else(|| file.backend_path.clone()),
            endpoint: args.endpoint.clone().or_else(|| file.endpoint.clone()),
            auth_env: args.auth_env.clone().or_else(|| file.auth_env.clone()),
            timeout_ms: args.timeout_ms.or(file.timeout_ms).unwrap_or(30_000),
            max_retries: args.max_retries.or(file.max_retries).unwrap_or(3),
            backoff_ms: args.backoff_ms.or(file.backoff_ms).unwrap_or(250),
            max_in_flight: args.max_in_flight.or(file.max_in_flight).unwrap_or(4),
            cache: args.cache.clone().or_else(|| file.cache.clone()),
            seed: args.seed.or(file.seed).unwrap_or(0),
            strict: args.strict || file.strict.unwrap_or(false),
            case_insensitive: args.case_insensitive || file.case_insensitive.unwrap_or(false),
            budget: args.budget.or(file.budget).unwrap_or(10_000_000),
            jobs: args.jobs.or(file.jobs).unwrap_or(1),
            lenient: args.lenient || file.lenient.unwrap_or(false),
            solver_kind,
            template_family,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if let Some(solver) = self.solver_kind {
            let coref_only = matches!(
                solver,
                SolverKind::R2l | SolverKind::AllYes | SolverKind::AllNo
            );
            if self.task == Task::Srl && coref_only {
                return Err(Error::validation(format!(
                    "solver {} is coreference-only and cannot run with --task srl",
                    solver.name()
                )));
            }
        }
        if let Some(family) = self.template_family {
            match self.task {
                Task::Srl if family.is_coref() => {
                    return Err(Error::validation(format!(
                        "template {family} is a coreference family and cannot run with --task srl"
                    )));
                }
                Task::Coref if !family.is_coref() => {
                    return Err(Error::validation(format!(
                        "template {family} is an SRL family and cannot run with --task coref"
                    )));
                }
                _ => {}
            }
        }
        if self.window == Some(0) {
            return Err(Error::validation("--window must be a positive integer"));
        }
        if self.k == 0 {
            return Err(Error::validation("--k must be a positive integer"));
        }
        if self.top_n == 0 {
            return Err(Error::validation("--top-n must be a positive integer"));
        }
        if self.jobs == 0 {
            return Err(Error::validation("--jobs must be a positive integer"));
        }
        Ok(())
    }

    pub fn require_template(&self) -> Result<TemplateFamily> {
        self.template_family
            .ok_or_else(|| Error::validation("--template is required for this command"))
    }

    pub fn require_solver(&self) -> Result<SolverKind> {
        self.solver_kind
            .ok_or_else(|| Error::validation("--solver is required for this command"))
    }

    /// Builds the scorer (backend plus optional cache).
    pub fn build_scorer(&self) -> Result<Scorer> {
        let kind = self
            .backend
            .ok_or_else(|| Error::validation("--backend is required for this command"))?;
        let backend = match kind {
            BackendKind::Mock => ScorerBackend::Mock(MockBackend { seed: self.seed }),
            BackendKind::File => {
                let path = self.backend_path.as_ref().ok_or_else(|| {
                    Error::validation("--backend-path is required with --backend file")
                })?;
                ScorerBackend::File(FileBackend::open(path)?)
            }
            BackendKind::Remote => {
                let endpoint = self.endpoint.clone().ok_or_else(|| {
                    Error::validation("--endpoint is required with --backend remote")
                })?;
                ScorerBackend::Remote(RemoteBackend::new(RemoteConfig {
                    endpoint,
                    auth_token_env: self.auth_env.clone(),
                    timeout: Duration::from_millis(self.timeout_ms),
                    max_retries: self.max_retries,
                    backoff_base: Duration::from_millis(self.backoff_ms),
                    max_in_flight: self.max_in_flight,
                })?)
            }
        };
        Ok(match &self.cache {
            Some(path) => Scorer::with_cache(backend, ScoreCache::open(path)?),
            None => Scorer::new(backend),
        })
    }

    /// Manifest header value: the full resolved config.
    pub fn manifest_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
