//! Shared input builders for the benchmark targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spanlink_core::model::{Clustering, CorefInstance, SrlInstance};
use spanlink_core::synth::{
    random_coref_instance, random_srl_instance, CorefSynthConfig, SrlSynthConfig,
};

/// Production-shaped SRL instances: up to 6 roles with 20 candidates over
/// a 14-token sentence.
pub fn srl_instances(count: usize, seed: u64) -> Vec<SrlInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = SrlSynthConfig::default();
    (0..count)
        .map(|i| random_srl_instance(&mut rng, &format!("bench-{i}"), &config))
        .collect()
}

/// Documents with up to `max_mentions` mentions and full pair coverage.
pub fn coref_instances(count: usize, max_mentions: usize, seed: u64) -> Vec<CorefInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = CorefSynthConfig {
        max_mentions,
        window: None,
        missing_pair_prob: 0.1,
    };
    (0..count)
        .map(|i| random_coref_instance(&mut rng, &format!("bench-{i}"), &config))
        .collect()
}

/// A pair of clusterings over `mentions` ids with `clusters` clusters
/// each, deterministic but differently shaped.
pub fn clustering_pair(mentions: usize, clusters: usize) -> (Clustering, Clustering) {
    let mut pred = vec![Vec::new(); clusters];
    let mut gold = vec![Vec::new(); clusters];
    for i in 0..mentions {
        pred[i % clusters].push(format!("m{i}"));
        gold[(i * 7 + i / clusters) % clusters].push(format!("m{i}"));
    }
    pred.retain(|c| !c.is_empty());
    gold.retain(|c| !c.is_empty());
    (
        Clustering::new(pred).expect("valid partition"),
        Clustering::new(gold).expect("valid partition"),
    )
}
