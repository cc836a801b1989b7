//! Shared domain types for both tasks: token spans, scored candidates, SRL
//! instances and structures, mentions, coreference instances, clusterings,
//! link decisions, and gold annotations.
//!
//! All types are immutable values after construction and safe to share
//! across threads.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Half-open token interval `[start, end)` within a tokenized sentence.
///
/// The half-open convention matches the boundary-vertex graph: a span edge
/// runs from the boundary before its first token to the boundary after its
/// last token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TokenSpan {
    pub start: usize,
    pub end: usize,
}

impl TokenSpan {
    /// Constructs a span. Panics if `start >= end`; use [`TokenSpan::try_new`]
    /// when the bounds come from untrusted input.
    pub fn new(start: usize, end: usize) -> Self {
        assert!(start < end, "invalid token span [{start}, {end})");
        TokenSpan { start, end }
    }

    pub fn try_new(start: usize, end: usize) -> Result<Self> {
        if start < end {
            Ok(TokenSpan { start, end })
        } else {
            Err(Error::validation(format!(
                "invalid token span [{start}, {end}): start must be < end"
            )))
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false // start < end is an invariant
    }
}

/// True iff the half-open intervals intersect in at least one token.
pub fn spans_overlap(a: TokenSpan, b: TokenSpan) -> bool {
    a.start < b.end && b.start < a.end
}

/// One generated answer span/sequence with its model log-score and rank.
///
/// Within a role's candidate list, ranks run 1..n without gaps and scores
/// are non-increasing in rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub text: String,
    /// Model log-score; higher is better.
    pub score: f64,
    /// 1-based rank; rank 1 is the highest-scored candidate.
    pub rank: u32,
}

/// A semantic role of a predicate: the question asked for it plus the
/// scored candidate answers (empty until scored).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Role {
    pub role_id: String,
    pub question: String,
    pub candidates: Vec<ScoredCandidate>,
}

/// A predicate in a tokenized sentence with one question per semantic role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrlInstance {
    pub instance_id: String,
    pub sentence_tokens: Vec<String>,
    pub predicate_index: usize,
    pub roles: Vec<Role>,
}

impl SrlInstance {
    /// Validates structural invariants. With `require_scored`, every role
    /// must carry at least one candidate with well-formed ranks and
    /// non-increasing scores; otherwise unscored roles are accepted (the
    /// form consumed by the prompt and scoring stages).
    pub fn validate(&self, require_scored: bool) -> Result<()> {
        if self.sentence_tokens.is_empty() {
            return Err(Error::validation(format!(
                "instance {}: empty sentence",
                self.instance_id
            )));
        }
        if self.predicate_index >= self.sentence_tokens.len() {
            return Err(Error::validation(format!(
                "instance {}: predicate index {} out of range for {} tokens",
                self.instance_id,
                self.predicate_index,
                self.sentence_tokens.len()
            )));
        }
        let mut seen = HashSet::new();
        for role in &self.roles {
            if !seen.insert(role.role_id.as_str()) {
                return Err(Error::validation(format!(
                    "instance {}: duplicate role id {:?}",
                    self.instance_id, role.role_id
                )));
            }
            if require_scored && role.candidates.is_empty() {
                return Err(Error::validation(format!(
                    "instance {}: role {:?} has no candidates",
                    self.instance_id, role.role_id
                )));
            }
            for (i, cand) in role.candidates.iter().enumerate() {
                if cand.rank as usize != i + 1 {
                    return Err(Error::validation(format!(
                        "instance {}: role {:?} candidate ranks must be 1..n without gaps \
                         (found rank {} at position {})",
                        self.instance_id,
                        role.role_id,
                        cand.rank,
                        i + 1
                    )));
                }
                if i > 0 && cand.score > role.candidates[i - 1].score {
                    return Err(Error::validation(format!(
                        "instance {}: role {:?} scores must be non-increasing in rank",
                        self.instance_id, role.role_id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A span assigned to a role: the resolved token interval plus its surface
/// text (sentence tokens joined with single spaces).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanAssignment {
    pub span: TokenSpan,
    pub text: String,
}

/// A role → span assignment for one predicate, possibly partial.
///
/// Post-inference, assigned spans are pairwise non-overlapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrlStructure {
    /// One entry per role of the instance; `None` means unassigned.
    pub assignments: BTreeMap<String, Option<SpanAssignment>>,
    /// Total edge cost of the selected path.
    pub total_cost: f64,
}

impl SrlStructure {
    pub fn empty(role_ids: impl IntoIterator<Item = String>) -> Self {
        SrlStructure {
            assignments: role_ids.into_iter().map(|r| (r, None)).collect(),
            total_cost: 0.0,
        }
    }

    /// Complete iff every role has an assignment.
    pub fn is_complete(&self) -> bool {
        self.assignments.values().all(|a| a.is_some())
    }

    pub fn assigned_spans(&self) -> impl Iterator<Item = TokenSpan> + '_ {
        self.assignments.values().flatten().map(|a| a.span)
    }
}

/// A mention expression in a document.
///
/// Token locations are relative to the mention's sentence; ids are unique
/// per document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mention {
    pub id: String,
    pub text: String,
    pub sentence_index: usize,
    pub token_start: usize,
    pub token_end: usize,
}

/// Mentions of one document plus pairwise link scores `s_{i,j}`.
///
/// Pair scores are stored once per unordered pair, keyed by mention
/// indices with the earlier-in-document mention first. Pairs outside the
/// generation window are simply absent.
#[derive(Debug, Clone, PartialEq)]
pub struct CorefInstance {
    pub document_id: String,
    /// Sentence strings, used as prompt context. May be empty when the
    /// instance is only used for inference.
    pub sentences: Vec<String>,
    /// Mentions in document order.
    pub mentions: Vec<Mention>,
    pair_scores: BTreeMap<(usize, usize), f64>,
    id_to_index: HashMap<String, usize>,
}

impl CorefInstance {
    pub fn new(
        document_id: String,
        sentences: Vec<String>,
        mentions: Vec<Mention>,
        pairs: Vec<(String, String, f64)>,
    ) -> Result<Self> {
        let mut id_to_index = HashMap::new();
        for (i, m) in mentions.iter().enumerate() {
            if id_to_index.insert(m.id.clone(), i).is_some() {
                return Err(Error::validation(format!(
                    "document {document_id}: duplicate mention id {:?}",
                    m.id
                )));
            }
        }
        let mut pair_scores = BTreeMap::new();
        for (a, b, score) in pairs {
            let ia = *id_to_index.get(&a).ok_or_else(|| {
                Error::validation(format!("document {document_id}: unknown mention id {a:?}"))
            })?;
            let ib = *id_to_index.get(&b).ok_or_else(|| {
                Error::validation(format!("document {document_id}: unknown mention id {b:?}"))
            })?;
            if ia == ib {
                return Err(Error::validation(format!(
                    "document {document_id}: pair score links mention {a:?} to itself"
                )));
            }
            let key = (ia.min(ib), ia.max(ib));
            if pair_scores.insert(key, score).is_some() {
                return Err(Error::validation(format!(
                    "document {document_id}: duplicate pair score for ({a:?}, {b:?})"
                )));
            }
        }
        Ok(CorefInstance {
            document_id,
            sentences,
            mentions,
            pair_scores,
            id_to_index,
        })
    }

    pub fn mention_index(&self, id: &str) -> Option<usize> {
        self.id_to_index.get(id).copied()
    }

    /// Score for the unordered pair of mention indices, if scored.
    pub fn pair_score(&self, i: usize, j: usize) -> Option<f64> {
        self.pair_scores.get(&(i.min(j), i.max(j))).copied()
    }

    /// Scored pairs as `((earlier, later), score)` in deterministic order.
    pub fn scored_pairs(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.pair_scores.iter().map(|(&k, &v)| (k, v))
    }

    pub fn scored_pair_count(&self) -> usize {
        self.pair_scores.len()
    }
}

/// A partition of mention ids into disjoint non-empty entity clusters.
///
/// Stored in canonical form: members sorted lexicographically within each
/// cluster, clusters sorted by their first member. Pairwise decisions
/// induced from a clustering satisfy transitivity by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    clusters: Vec<Vec<String>>,
}

impl Clustering {
    pub fn new(clusters: Vec<Vec<String>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for cluster in &clusters {
            if cluster.is_empty() {
                return Err(Error::validation("clustering contains an empty cluster"));
            }
            for id in cluster {
                if !seen.insert(id.clone()) {
                    return Err(Error::validation(format!(
                        "mention {id:?} appears in more than one cluster"
                    )));
                }
            }
        }
        let mut clusters: Vec<Vec<String>> = clusters
            .into_iter()
            .map(|mut c| {
                c.sort();
                c
            })
            .collect();
        clusters.sort();
        Ok(Clustering { clusters })
    }

    /// Builds a clustering over `instance` mentions from index-based clusters.
    pub fn from_indices(instance: &CorefInstance, clusters: Vec<Vec<usize>>) -> Result<Self> {
        let ids = clusters
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|i| instance.mentions[i].id.clone())
                    .collect()
            })
            .collect();
        Clustering::new(ids)
    }

    /// All mentions as singletons.
    pub fn singletons(ids: impl IntoIterator<Item = String>) -> Self {
        Clustering::new(ids.into_iter().map(|id| vec![id]).collect())
            .expect("singletons form a valid partition")
    }

    pub fn clusters(&self) -> &[Vec<String>] {
        &self.clusters
    }

    pub fn mention_count(&self) -> usize {
        self.clusters.iter().map(|c| c.len()).sum()
    }

    pub fn mention_ids(&self) -> impl Iterator<Item = &str> {
        self.clusters.iter().flatten().map(|s| s.as_str())
    }

    /// Map from mention id to the index of its cluster.
    pub fn membership(&self) -> HashMap<&str, usize> {
        let mut map = HashMap::new();
        for (ci, cluster) in self.clusters.iter().enumerate() {
            for id in cluster {
                map.insert(id.as_str(), ci);
            }
        }
        map
    }

    pub fn same_cluster(&self, a: &str, b: &str) -> bool {
        let m = self.membership();
        match (m.get(a), m.get(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }
}

/// Binary link decisions `y_{i,j}` over the scored mention pairs of one
/// document.
///
/// Keys keep the producer's orientation (earlier-in-document mention
/// first); lookups accept either order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkDecisionSet {
    map: BTreeMap<(String, String), bool>,
}

impl LinkDecisionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: String, b: String, decision: bool) {
        self.map.insert((a, b), decision);
    }

    /// Decision for the unordered pair, if present.
    pub fn get(&self, a: &str, b: &str) -> Option<bool> {
        self.map
            .get(&(a.to_string(), b.to_string()))
            .or_else(|| self.map.get(&(b.to_string(), a.to_string())))
            .copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, bool)> {
        self.map.iter().map(|((a, b), &y)| (a.as_str(), b.as_str(), y))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// All mention ids appearing in at least one scored pair, sorted.
    pub fn mention_universe(&self) -> Vec<&str> {
        let mut set = BTreeSet::new();
        for ((a, b), _) in self.map.iter() {
            set.insert(a.as_str());
            set.insert(b.as_str());
        }
        set.into_iter().collect()
    }

    pub fn positive_count(&self) -> usize {
        self.map.values().filter(|&&y| y).count()
    }
}

/// Gold SRL annotation: per role, the acceptable answer strings. A
/// prediction matches a role if it matches any listed answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrlGold {
    pub instance_id: String,
    pub roles: Vec<GoldRole>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldRole {
    pub role_id: String,
    pub answers: Vec<String>,
}

/// Gold coreference annotation: the reference entity partition.
#[derive(Debug, Clone, PartialEq)]
pub struct CorefGold {
    pub document_id: String,
    pub clustering: Clustering,
}

/// Gold annotation for one instance of either task.
#[derive(Debug, Clone, PartialEq)]
pub enum GoldAnnotation {
    Srl(SrlGold),
    Coref(CorefGold),
}
