//! Scoring backends: a file-backed store of precomputed responses, a
//! deterministic mock, and a JSON-over-HTTP client for a remote
//! sequence-scoring service, plus an append-safe response cache.
//!
//! All backends satisfy one contract: given a prompt and a mode, return
//! ranked candidates with log-scores, rank 1 highest. Scores stay in log
//! space end to end; the engine never exponentiates.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::io::{load_score_store, LoadMode, StoredScore};
use crate::model::ScoredCandidate;
use crate::Result;

pub mod stub;

/// What the backend is asked to produce for a prompt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScoreMode {
    /// The best-n generations with their scores.
    GenerateTopN { n: usize },
    /// Scores for a fixed set of generations (e.g. restricting to Yes/No).
    ScoreChoices { choices: Vec<String> },
}

impl ScoreMode {
    fn fingerprint(&self) -> String {
        match self {
            ScoreMode::GenerateTopN { n } => format!("gen:{n}"),
            ScoreMode::ScoreChoices { choices } => {
                format!("choices:{}", choices.join("\u{1f}"))
            }
        }
    }
}

/// Coreference link score `s_{i,j} = f_yes - f_no`; a positive sign means
/// the model prefers "Yes".
pub fn link_score(yes_score: f64, no_score: f64) -> f64 {
    yes_score - no_score
}

/// Short stable fingerprint identifying a prompt in logs and errors.
pub fn prompt_fingerprint(prompt: &str) -> String {
    format!("{:016x}", hash_strings(0, &[prompt]))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn hash_strings(seed: u64, parts: &[&str]) -> u64 {
    let mut state = splitmix64(seed);
    for part in parts {
        for byte in part.bytes() {
            state = splitmix64(state ^ u64::from(byte));
        }
        state = splitmix64(state ^ 0xFF);
    }
    state
}

/// Deterministic pseudo-score for a (prompt, candidate) pair in `[-10, 0]`.
pub fn mock_score(seed: u64, prompt: &str, candidate: &str) -> f64 {
    let h = hash_strings(seed, &[prompt, candidate]);
    -10.0 * (h as f64 / u64::MAX as f64)
}

/// Sorts (text, score) pairs into rank order and assigns ranks. Duplicate
/// texts collapse to their best score so retries can never introduce
/// duplicate entries.
fn to_ranked_candidates(mut scored: Vec<(String, f64)>) -> Vec<ScoredCandidate> {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.dedup_by(|next, kept| next.0 == kept.0);
    scored
        .into_iter()
        .enumerate()
        .map(|(i, (text, score))| ScoredCandidate {
            text,
            score,
            rank: (i + 1) as u32,
        })
        .collect()
}

/// Deterministic mock: candidates are token n-grams of the prompt scored
/// by a splitmix-style hash, so pipelines run reproducibly with no model.
#[derive(Debug, Clone, Copy, Default)]
pub struct MockBackend {
    pub seed: u64,
}

impl MockBackend {
    pub fn score_candidates(&self, prompt: &str, mode: &ScoreMode) -> Vec<ScoredCandidate> {
        match mode {
            ScoreMode::GenerateTopN { n } => {
                let tokens: Vec<&str> = prompt.split_whitespace().collect();
                let mut pool: Vec<String> = Vec::new();
                for len in 1..=4usize.min(tokens.len()) {
                    for start in 0..=(tokens.len() - len) {
                        pool.push(tokens[start..start + len].join(" "));
                    }
                }
                pool.sort();
                pool.dedup();
                let scored = pool
                    .into_iter()
                    .map(|text| {
                        let score = mock_score(self.seed, prompt, &text);
                        (text, score)
                    })
                    .collect();
                let mut ranked = to_ranked_candidates(scored);
                ranked.truncate(*n);
                ranked
            }
            ScoreMode::ScoreChoices { choices } => to_ranked_candidates(
                choices
                    .iter()
                    .map(|c| (c.clone(), mock_score(self.seed, prompt, c)))
                    .collect(),
            ),
        }
    }
}

/// Serves responses recorded in a `score_store` JSONL file, keyed by the
/// exact prompt string.
#[derive(Debug)]
pub struct FileBackend {
    path: PathBuf,
    store: HashMap<String, Vec<StoredScore>>,
}

impl FileBackend {
    pub fn open(path: &Path) -> Result<Self> {
        let loaded = load_score_store(path, LoadMode::Strict)?;
        let mut store = HashMap::new();
        for record in loaded.items {
            if store.insert(record.prompt.clone(), record.candidates).is_some() {
                return Err(Error::validation(format!(
                    "score store {}: duplicate entry for prompt {}",
                    path.display(),
                    prompt_fingerprint(&record.prompt)
                )));
            }
        }
        Ok(FileBackend {
            path: path.to_path_buf(),
            store,
        })
    }

    pub fn score_candidates(&self, prompt: &str, mode: &ScoreMode) -> Result<Vec<ScoredCandidate>> {
        let stored = self.store.get(prompt).ok_or_else(|| {
            Error::validation(format!(
                "score store {} has no entry for prompt {}",
                self.path.display(),
                prompt_fingerprint(prompt)
            ))
        })?;
        match mode {
            ScoreMode::GenerateTopN { n } => {
                let mut ranked = to_ranked_candidates(
                    stored.iter().map(|s| (s.text.clone(), s.log_score)).collect(),
                );
                ranked.truncate(*n);
                Ok(ranked)
            }
            ScoreMode::ScoreChoices { choices } => {
                let mut scored = Vec::with_capacity(choices.len());
                for choice in choices {
                    let found = stored.iter().find(|s| &s.text == choice).ok_or_else(|| {
                        Error::validation(format!(
                            "score store {} entry for prompt {} lacks choice {choice:?}",
                            self.path.display(),
                            prompt_fingerprint(prompt)
                        ))
                    })?;
                    scored.push((found.text.clone(), found.log_score));
                }
                Ok(to_ranked_candidates(scored))
            }
        }
    }
}

/// Remote scoring endpoint configuration. The auth token is read from the
/// named environment variable at request time and never stored or logged.
#[derive(Debug, Clone)]
pub struct RemoteConfig {
    pub endpoint: String,
    /// Name of the environment variable holding the bearer token.
    pub auth_token_env: Option<String>,
    pub timeout: Duration,
    /// Retries after the first attempt.
    pub max_retries: u32,
    pub backoff_base: Duration,
    pub max_in_flight: usize,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        RemoteConfig {
            endpoint: String::new(),
            auth_token_env: None,
            timeout: Duration::from_secs(30),
            max_retries: 3,
            backoff_base: Duration::from_millis(250),
            max_in_flight: 4,
        }
    }
}

#[derive(Serialize)]
struct RemoteRequest<'a> {
    prompt: &'a str,
    #[serde(flatten)]
    mode: &'a ScoreMode,
}

#[derive(Deserialize)]
struct RemoteResponse {
    candidates: Vec<StoredScore>,
}

/// Counting semaphore bounding concurrent requests.
struct Semaphore {
    permits: Mutex<usize>,
    available: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Self {
        Semaphore {
            permits: Mutex::new(permits),
            available: Condvar::new(),
        }
    }

    fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut permits = self.permits.lock().unwrap();
        while *permits == 0 {
            permits = self.available.wait(permits).unwrap();
        }
        *permits -= 1;
        SemaphoreGuard { semaphore: self }
    }
}

struct SemaphoreGuard<'a> {
    semaphore: &'a Semaphore,
}

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        let mut permits = self.semaphore.permits.lock().unwrap();
        *permits += 1;
        self.semaphore.available.notify_one();
    }
}

/// JSON-over-HTTP client for the remote scoring contract.
///
/// POST `{"prompt", "mode", "n" | "choices"}`; 2xx responses carry
/// `{"candidates": [{"text", "log_score"}]}`. 429 responses are retried
/// honoring `Retry-After`, 5xx with exponential backoff; other 4xx are
/// protocol errors. At most `max_in_flight` requests run concurrently.
pub struct RemoteBackend {
    config: RemoteConfig,
    client: reqwest::blocking::Client,
    semaphore: Semaphore,
}

impl std::fmt::Debug for RemoteBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteBackend")
            .field("endpoint", &self.config.endpoint)
            .finish_non_exhaustive()
    }
}

impl RemoteBackend {
    pub fn new(config: RemoteConfig) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| Error::validation(format!("building http client: {e}")))?;
        let semaphore = Semaphore::new(config.max_in_flight.max(1));
        Ok(RemoteBackend {
            config,
            client,
            semaphore,
        })
    }

    fn auth_token(&self) -> Result<Option<String>> {
        match &self.config.auth_token_env {
            None => Ok(None),
            Some(var) => match std::env::var(var) {
                Ok(token) => Ok(Some(token)),
                Err(_) => Err(Error::validation(format!(
                    "auth token environment variable {var} is not set"
                ))),
            },
        }
    }

    pub fn score_candidates(&self, prompt: &str, mode: &ScoreMode) -> Result<Vec<ScoredCandidate>> {
        let prompt_id = prompt_fingerprint(prompt);
        let token = self.auth_token()?;
        let attempts = self.config.max_retries + 1;
        let mut timed_out = false;
        let mut last_message = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                // Backoff happens outside the in-flight permit.
                std::thread::sleep(self.config.backoff_base * (1 << (attempt - 1).min(16)));
            }
            let outcome = {
                let _permit = self.semaphore.acquire();
                let mut request = self
                    .client
                    .post(&self.config.endpoint)
                    .json(&RemoteRequest { prompt, mode });
                if let Some(token) = &token {
                    request = request.bearer_auth(token);
                }
                request.send()
            };
            match outcome {
                Err(e) => {
                    timed_out = e.is_timeout();
                    last_message = format!("transport error: {e}");
                    continue;
                }
                Ok(response) => {
                    let status = response.status();
                    if status.is_success() {
                        let parsed: RemoteResponse = response.json().map_err(|e| {
                            Error::RemoteProtocol {
                                prompt_id: prompt_id.clone(),
                                message: format!("malformed response body: {e}"),
                            }
                        })?;
                        return self.finish(prompt, mode, parsed);
                    }
                    if status.as_u16() == 429 {
                        timed_out = false;
                        last_message = "status 429".into();
                        if let Some(wait) = response
                            .headers()
                            .get(reqwest::header::RETRY_AFTER)
                            .and_then(|v| v.to_str().ok())
                            .and_then(|v| v.parse::<u64>().ok())
                        {
                            std::thread::sleep(Duration::from_secs(wait));
                        }
                        continue;
                    }
                    if status.is_server_error() {
                        timed_out = false;
                        last_message = format!("status {status}");
                        continue;
                    }
                    return Err(Error::RemoteProtocol {
                        prompt_id,
                        message: format!("status {status}"),
                    });
                }
            }
        }
        if timed_out {
            Err(Error::RemoteTimeout {
                prompt_id,
                attempts,
            })
        } else {
            Err(Error::RemoteProtocol {
                prompt_id,
                message: format!("retries exhausted after {attempts} attempts; {last_message}"),
            })
        }
    }

    fn finish(
        &self,
        prompt: &str,
        mode: &ScoreMode,
        response: RemoteResponse,
    ) -> Result<Vec<ScoredCandidate>> {
        let scored: Vec<(String, f64)> = response
            .candidates
            .into_iter()
            .map(|c| (c.text, c.log_score))
            .collect();
        match mode {
            ScoreMode::GenerateTopN { n } => {
                let mut ranked = to_ranked_candidates(scored);
                ranked.truncate(*n);
                Ok(ranked)
            }
            ScoreMode::ScoreChoices { choices } => {
                let ranked = to_ranked_candidates(scored);
                for choice in choices {
                    if !ranked.iter().any(|c| &c.text == choice) {
                        return Err(Error::RemoteProtocol {
                            prompt_id: prompt_fingerprint(prompt),
                            message: format!("response does not cover choice {choice:?}"),
                        });
                    }
                }
                if ranked.len() != choices.len() {
                    return Err(Error::RemoteProtocol {
                        prompt_id: prompt_fingerprint(prompt),
                        message: format!(
                            "response has {} candidates for {} choices",
                            ranked.len(),
                            choices.len()
                        ),
                    });
                }
                Ok(ranked)
            }
        }
    }
}

/// One of the three scoring backends.
#[derive(Debug)]
pub enum ScorerBackend {
    File(FileBackend),
    Mock(MockBackend),
    Remote(RemoteBackend),
}

impl ScorerBackend {
    /// Stable identifier used in cache keys.
    pub fn id(&self) -> String {
        match self {
            ScorerBackend::File(b) => format!("file:{}", b.path.display()),
            ScorerBackend::Mock(b) => format!("mock:{}", b.seed),
            ScorerBackend::Remote(b) => format!("remote:{}", b.config.endpoint),
        }
    }

    pub fn score_candidates(
        &self,
        prompt: &str,
        mode: &ScoreMode,
    ) -> Result<Vec<ScoredCandidate>> {
        match self {
            ScorerBackend::File(b) => b.score_candidates(prompt, mode),
            ScorerBackend::Mock(b) => Ok(b.score_candidates(prompt, mode)),
            ScorerBackend::Remote(b) => b.score_candidates(prompt, mode),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    schema_version: u32,
    backend_id: String,
    mode: String,
    prompt: String,
    candidates: Vec<StoredScore>,
}

/// Append-safe response cache keyed by (backend id, mode, prompt).
///
/// Hits reproduce the original response bit for bit. Each entry is one
/// JSONL line written and flushed atomically with respect to other keys.
pub struct ScoreCache {
    path: PathBuf,
    entries: Mutex<HashMap<(String, String, String), Vec<StoredScore>>>,
    file: Mutex<File>,
}

impl ScoreCache {
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let file = File::open(path).map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
            for (idx, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| Error::Io {
                    path: path.to_path_buf(),
                    source: e,
                })?;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed: CacheLine =
                    serde_json::from_str(&line).map_err(|e| Error::Parse {
                        path: path.to_path_buf(),
                        line: idx + 1,
                        message: e.to_string(),
                    })?;
                entries.insert(
                    (parsed.backend_id, parsed.mode, parsed.prompt),
                    parsed.candidates,
                );
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
        Ok(ScoreCache {
            path: path.to_path_buf(),
            entries: Mutex::new(entries),
            file: Mutex::new(file),
        })
    }

    fn get(&self, key: &(String, String, String)) -> Option<Vec<StoredScore>> {
        self.entries.lock().unwrap().get(key).cloned()
    }

    fn put(&self, key: (String, String, String), candidates: &[StoredScore]) -> Result<()> {
        let line = CacheLine {
            schema_version: crate::io::SCHEMA_VERSION,
            backend_id: key.0.clone(),
            mode: key.1.clone(),
            prompt: key.2.clone(),
            candidates: candidates.to_vec(),
        };
        let mut serialized = serde_json::to_string(&line)
            .map_err(|e| Error::validation(format!("serializing cache entry: {e}")))?;
        serialized.push('\n');
        {
            let mut file = self.file.lock().unwrap();
            file.write_all(serialized.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| Error::Io {
                    path: self.path.clone(),
                    source: e,
                })?;
        }
        self.entries.lock().unwrap().insert(key, candidates.to_vec());
        Ok(())
    }
}

/// A backend plus an optional cache in front of it.
pub struct Scorer {
    backend: ScorerBackend,
    cache: Option<ScoreCache>,
}

impl Scorer {
    pub fn new(backend: ScorerBackend) -> Self {
        Scorer {
            backend,
            cache: None,
        }
    }

    pub fn with_cache(backend: ScorerBackend, cache: ScoreCache) -> Self {
        Scorer {
            backend,
            cache: Some(cache),
        }
    }

    pub fn backend_id(&self) -> String {
        self.backend.id()
    }

    pub fn score_candidates(
        &self,
        prompt: &str,
        mode: &ScoreMode,
    ) -> Result<Vec<ScoredCandidate>> {
        let Some(cache) = &self.cache else {
            return self.backend.score_candidates(prompt, mode);
        };
        let key = (
            self.backend.id(),
            mode.fingerprint(),
            prompt.to_string(),
        );
        if let Some(stored) = cache.get(&key) {
            return Ok(stored
                .into_iter()
                .enumerate()
                .map(|(i, s)| ScoredCandidate {
                    text: s.text,
                    score: s.log_score,
                    rank: (i + 1) as u32,
                })
                .collect());
        }
        let candidates = self.backend.score_candidates(prompt, mode)?;
        let stored: Vec<StoredScore> = candidates
            .iter()
            .map(|c| StoredScore {
                text: c.text.clone(),
                log_score: c.score,
            })
            .collect();
        cache.put(key, &stored)?;
        Ok(candidates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{write_records, Record, ScoreStoreRecord};

    #[test]
    fn link_score_arithmetic() {
        assert_eq!(link_score(-1.0, -3.0), 2.0);
        assert_eq!(link_score(1.5, 1.5), 0.0);
    }

    #[test]
    fn mock_is_deterministic_and_ranked() {
        let mock = MockBackend { seed: 0 };
        let mode = ScoreMode::GenerateTopN { n: 20 };
        let a = mock.score_candidates("question: Who? context: Elrond gave Aragorn the sword.", &mode);
        let b = mock.score_candidates("question: Who? context: Elrond gave Aragorn the sword.", &mode);
        assert_eq!(a, b);
        assert!(!a.is_empty());
        for (i, cand) in a.iter().enumerate() {
            assert_eq!(cand.rank as usize, i + 1);
            assert!(cand.score <= 0.0 && cand.score >= -10.0);
            if i > 0 {
                assert!(cand.score <= a[i - 1].score);
            }
        }
        // Different prompts give different score assignments.
        let c = mock.score_candidates("question: Who? context: something else entirely.", &mode);
        assert_ne!(a, c);
    }

    #[test]
    fn mock_score_choices_covers_both() {
        let mock = MockBackend { seed: 7 };
        let out = mock.score_candidates(
            "p",
            &ScoreMode::ScoreChoices {
                choices: vec!["Yes".into(), "No".into()],
            },
        );
        assert_eq!(out.len(), 2);
        let texts: Vec<&str> = out.iter().map(|c| c.text.as_str()).collect();
        assert!(texts.contains(&"Yes") && texts.contains(&"No"));
        assert_eq!(out[0].rank, 1);
        assert!(out[0].score >= out[1].score);
    }

    fn store_file(entries: &[(&str, &[(&str, f64)])]) -> tempfile::NamedTempFile {
        let file = tempfile::NamedTempFile::new().unwrap();
        let records: Vec<Record> = entries
            .iter()
            .map(|(prompt, candidates)| {
                Record::ScoreStore(ScoreStoreRecord {
                    prompt: prompt.to_string(),
                    candidates: candidates
                        .iter()
                        .map(|(text, score)| StoredScore {
                            text: text.to_string(),
                            log_score: *score,
                        })
                        .collect(),
                })
            })
            .collect();
        write_records(file.path(), records.iter()).unwrap();
        file
    }

    #[test]
    fn file_backend_returns_stored_scores_verbatim() {
        let file = store_file(&[(
            "q-a",
            &[("Elrond", 2.0), ("Elrond gave", 1.0)],
        )]);
        let backend = FileBackend::open(file.path()).unwrap();
        let out = backend
            .score_candidates("q-a", &ScoreMode::GenerateTopN { n: 20 })
            .unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!((out[0].text.as_str(), out[0].score, out[0].rank), ("Elrond", 2.0, 1));
        assert_eq!(
            (out[1].text.as_str(), out[1].score, out[1].rank),
            ("Elrond gave", 1.0, 2)
        );
    }

    #[test]
    fn file_backend_missing_prompt_and_choice() {
        let file = store_file(&[("p", &[("Yes", -1.0)])]);
        let backend = FileBackend::open(file.path()).unwrap();
        assert!(backend
            .score_candidates("absent", &ScoreMode::GenerateTopN { n: 5 })
            .is_err());
        assert!(backend
            .score_candidates(
                "p",
                &ScoreMode::ScoreChoices {
                    choices: vec!["Yes".into(), "No".into()]
                }
            )
            .is_err());
    }

    #[test]
    fn duplicate_texts_collapse() {
        let ranked = to_ranked_candidates(vec![
            ("x".into(), -2.0),
            ("x".into(), -1.0),
            ("y".into(), -3.0),
        ]);
        assert_eq!(ranked.len(), 2);
        assert_eq!(ranked[0].text, "x");
        assert_eq!(ranked[0].score, -1.0);
    }

    #[test]
    fn cache_transparency_and_persistence() {
        let dir = tempfile::tempdir().unwrap();
        let cache_path = dir.path().join("cache.jsonl");
        let mode = ScoreMode::GenerateTopN { n: 10 };
        let bare = Scorer::new(ScorerBackend::Mock(MockBackend { seed: 3 }));
        let cached = Scorer::with_cache(
            ScorerBackend::Mock(MockBackend { seed: 3 }),
            ScoreCache::open(&cache_path).unwrap(),
        );
        let expected = bare.score_candidates("a b c d", &mode).unwrap();
        assert_eq!(cached.score_candidates("a b c d", &mode).unwrap(), expected);
        // Second call hits the cache; results identical.
        assert_eq!(cached.score_candidates("a b c d", &mode).unwrap(), expected);

        // Reopen from disk: still identical.
        let reopened = Scorer::with_cache(
            ScorerBackend::Mock(MockBackend { seed: 3 }),
            ScoreCache::open(&cache_path).unwrap(),
        );
        assert_eq!(
            reopened.score_candidates("a b c d", &mode).unwrap(),
            expected
        );
    }

    #[test]
    fn cache_distinguishes_modes_and_backends() {
        let dir = tempfile::tempdir().unwrap();
        let cache_path = dir.path().join("cache.jsonl");
        let s1 = Scorer::with_cache(
            ScorerBackend::Mock(MockBackend { seed: 1 }),
            ScoreCache::open(&cache_path).unwrap(),
        );
        let gen = s1
            .score_candidates("p q", &ScoreMode::GenerateTopN { n: 3 })
            .unwrap();
        let choices = s1
            .score_candidates(
                "p q",
                &ScoreMode::ScoreChoices {
                    choices: vec!["p".into()],
                },
            )
            .unwrap();
        assert_ne!(gen, choices);
        // A different backend seed must not see seed-1 entries.
        let s2 = Scorer::with_cache(
            ScorerBackend::Mock(MockBackend { seed: 2 }),
            ScoreCache::open(&cache_path).unwrap(),
        );
        let gen2 = s2
            .score_candidates("p q", &ScoreMode::GenerateTopN { n: 3 })
            .unwrap();
        assert_ne!(gen, gen2);
    }
}
