//! Seeded synthetic instance generation.
//!
//! Produces randomized-but-reproducible scored instances for pipeline
//! runs, benchmarks, and the randomized verification suites. Scores land
//! on a dyadic grid (multiples of 1/64) so sums of any reordering are
//! exact in floating point, which keeps cost comparisons against the
//! brute-force oracles exact while still exercising score ties.

use rand::Rng;

use crate::model::{CorefInstance, Mention, Role, ScoredCandidate, SrlInstance};
use crate::prompt::generate_mention_pairs;

const VOCAB: [&str; 6] = ["ash", "birch", "cedar", "dew", "elm", "fern"];

/// A random score multiple of 1/64 in `[lo, hi]`.
pub fn dyadic_score(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let lo_units = (lo * 64.0).round() as i64;
    let hi_units = (hi * 64.0).round() as i64;
    rng.gen_range(lo_units..=hi_units) as f64 / 64.0
}

/// Knobs for [`random_srl_instance`].
#[derive(Debug, Clone)]
pub struct SrlSynthConfig {
    pub max_roles: usize,
    pub max_candidates: usize,
    pub max_tokens: usize,
    /// Probability that a candidate is junk text absent from the sentence.
    pub unlocatable_prob: f64,
}

impl Default for SrlSynthConfig {
    fn default() -> Self {
        SrlSynthConfig {
            max_roles: 6,
            max_candidates: 20,
            max_tokens: 14,
            unlocatable_prob: 0.1,
        }
    }
}

/// A random SRL instance: a sentence over a small vocabulary (so candidate
/// texts recur at several positions), roles with ranked candidates whose
/// scores are non-increasing on the dyadic grid.
pub fn random_srl_instance(
    rng: &mut impl Rng,
    instance_id: &str,
    config: &SrlSynthConfig,
) -> SrlInstance {
    let token_count = rng.gen_range(3..=config.max_tokens.max(3));
    let sentence_tokens: Vec<String> = (0..token_count)
        .map(|_| VOCAB[rng.gen_range(0..VOCAB.len())].to_string())
        .collect();
    let role_count = rng.gen_range(1..=config.max_roles.max(1));
    let roles = (0..role_count)
        .map(|r| {
            let candidate_count = rng.gen_range(1..=config.max_candidates.max(1));
            let mut score = dyadic_score(rng, -2.0, 0.0);
            let candidates = (1..=candidate_count)
                .map(|rank| {
                    let text = if rng.gen_bool(config.unlocatable_prob) {
                        format!("zz{}", rng.gen_range(0..10))
                    } else {
                        let len = rng.gen_range(1..=3.min(token_count));
                        let start = rng.gen_range(0..=(token_count - len));
                        sentence_tokens[start..start + len].join(" ")
                    };
                    let candidate = ScoredCandidate {
                        text,
                        score,
                        rank: rank as u32,
                    };
                    score -= dyadic_score(rng, 0.0, 1.0);
                    candidate
                })
                .collect();
            Role {
                role_id: format!("r{r}"),
                question: format!("question {r}?"),
                candidates,
            }
        })
        .collect();
    SrlInstance {
        instance_id: instance_id.to_string(),
        sentence_tokens,
        predicate_index: rng.gen_range(0..token_count),
        roles,
    }
}

/// Knobs for [`random_coref_instance`].
#[derive(Debug, Clone)]
pub struct CorefSynthConfig {
    pub max_mentions: usize,
    /// Sentence window for pair generation; `None` scores all pairs.
    pub window: Option<usize>,
    /// Probability that an in-window pair is left unscored anyway.
    pub missing_pair_prob: f64,
}

impl Default for CorefSynthConfig {
    fn default() -> Self {
        CorefSynthConfig {
            max_mentions: 12,
            window: None,
            missing_pair_prob: 0.1,
        }
    }
}

/// A random coreference instance with dyadic link scores in `[-8, 8]`.
/// Mentions sit in non-decreasing sentence positions so windowing has
/// something to cut.
pub fn random_coref_instance(
    rng: &mut impl Rng,
    document_id: &str,
    config: &CorefSynthConfig,
) -> CorefInstance {
    let mention_count = rng.gen_range(1..=config.max_mentions.max(1));
    let mut sentence = 0usize;
    let mentions: Vec<Mention> = (0..mention_count)
        .map(|i| {
            sentence += rng.gen_range(0..=2);
            Mention {
                id: format!("m{i}"),
                text: format!("{} {i}", VOCAB[rng.gen_range(0..VOCAB.len())]),
                sentence_index: sentence,
                token_start: 0,
                token_end: 1,
            }
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, j) in generate_mention_pairs(&mentions, config.window) {
        if rng.gen_bool(config.missing_pair_prob) {
            continue;
        }
        pairs.push((
            mentions[i].id.clone(),
            mentions[j].id.clone(),
            dyadic_score(rng, -8.0, 8.0),
        ));
    }
    CorefInstance::new(document_id.to_string(), Vec::new(), mentions, pairs)
        .expect("synthetic instances are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn srl_instances_are_valid_and_reproducible() {
        let config = SrlSynthConfig::default();
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for i in 0..50 {
            let x = random_srl_instance(&mut a, &format!("i{i}"), &config);
            let y = random_srl_instance(&mut b, &format!("i{i}"), &config);
            assert_eq!(x, y);
            x.validate(true).unwrap();
        }
    }

    #[test]
    fn coref_instances_are_valid_and_windowed() {
        let config = CorefSynthConfig {
            max_mentions: 10,
            window: Some(2),
            missing_pair_prob: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..50 {
            let inst = random_coref_instance(&mut rng, &format!("d{i}"), &config);
            for ((a, b), _) in inst.scored_pairs() {
                let gap = inst.mentions[a]
                    .sentence_index
                    .abs_diff(inst.mentions[b].sentence_index);
                assert!(gap < 2);
            }
        }
    }

    #[test]
    fn dyadic_scores_sit_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = dyadic_score(&mut rng, -8.0, 8.0);
            assert_eq!(s, (s * 64.0).round() / 64.0);
            assert!((-8.0..=8.0).contains(&s));
        }
    }
}
