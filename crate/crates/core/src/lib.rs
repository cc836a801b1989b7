//! Constrained structured inference over independently scored candidate
//! sub-structures.
//!
//! Two tasks are supported end to end:
//!
//! * **SRL argument-span selection** — per-role candidate spans with model
//!   log-scores are compiled into a boundary-vertex graph, the K shortest
//!   loopless paths are enumerated, and the best complete (or maximal
//!   partial) non-overlapping structure is selected ([`srl`]).
//! * **Coreference clustering** — pairwise link scores are turned into
//!   transitivity-consistent entity clusters, either exactly (branch and
//!   bound over partitions) or via the right-to-left heuristic and trivial
//!   baselines ([`coref`]).
//!
//! Supporting modules cover evaluation metrics ([`metrics`]), JSONL file
//! formats ([`io`]), prompt-template rendering and mention-pair generation
//! ([`prompt`]), scoring backends with caching and retries ([`scorer`]),
//! synthetic instance generation ([`synth`]), and brute-force reference
//! implementations used to cross-check the solvers ([`oracle`]).

pub mod coref;
pub mod error;
pub mod io;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod prompt;
pub mod scorer;
pub mod srl;
pub mod synth;

pub use error::Error;
pub use model::{
    Clustering, CorefInstance, GoldAnnotation, LinkDecisionSet, Mention, Role, ScoredCandidate,
    SrlInstance, SrlStructure, TokenSpan,
};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
