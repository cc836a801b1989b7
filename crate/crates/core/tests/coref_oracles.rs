//! Randomized cross-checks of the clustering solvers: exact solver versus
//! Bell-number enumeration, transitivity of every solver's output, and
//! the objective-dominance relations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spanlink_core::coref::{
    all_link_solve, baseline_all_no, baseline_all_yes, brute_force_clustering,
    clustering_objective, induced_decisions, r2l_assign, unconstrained_decisions, SolverBudget,
};
use spanlink_core::metrics::rho_coref_counts;
use spanlink_core::synth::{random_coref_instance, CorefSynthConfig};

fn config(max_mentions: usize) -> CorefSynthConfig {
    CorefSynthConfig {
        max_mentions,
        window: None,
        missing_pair_prob: 0.1,
    }
}

#[test]
fn all_link_matches_bell_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACE);
    let budget = SolverBudget::default();
    for i in 0..400 {
        let instance = random_coref_instance(&mut rng, &format!("d{i}"), &config(8));
        let (solved, report) = all_link_solve(&instance, &budget).unwrap();
        assert!(report.optimal, "document {i}");
        let brute = brute_force_clustering(&instance).unwrap();
        assert_eq!(
            report.objective,
            clustering_objective(&instance, &brute),
            "document {i}: objective differs from enumeration"
        );
        assert_eq!(
            report.objective,
            clustering_objective(&instance, &solved),
            "document {i}: reported objective differs from recomputation"
        );
    }
}

#[test]
fn every_solver_output_is_transitively_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEE);
    let budget = SolverBudget::default();
    for i in 0..300 {
        let instance = random_coref_instance(&mut rng, &format!("d{i}"), &config(10));
        let decisions = unconstrained_decisions(&instance);
        let clusterings = [
            all_link_solve(&instance, &budget).unwrap().0,
            r2l_assign(&instance, &decisions),
            baseline_all_yes(&instance),
            baseline_all_no(&instance),
        ];
        for (s, clustering) in clusterings.iter().enumerate() {
            let induced = induced_decisions(&instance, clustering);
            let counts = rho_coref_counts(&induced);
            assert_eq!(
                counts.violations, 0,
                "document {i} solver {s}: induced decisions violate transitivity"
            );
        }
    }
}

#[test]
fn all_link_dominates_r2l_and_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0E);
    let budget = SolverBudget::default();
    for i in 0..400 {
        let instance = random_coref_instance(&mut rng, &format!("d{i}"), &config(12));
        let (_, report) = all_link_solve(&instance, &budget).unwrap();
        let decisions = unconstrained_decisions(&instance);
        let r2l = r2l_assign(&instance, &decisions);
        let r2l_objective = clustering_objective(&instance, &r2l);
        assert!(
            report.objective >= r2l_objective,
            "document {i}: all-link {} < r2l {}",
            report.objective,
            r2l_objective
        );
        assert!(report.objective >= 0.0, "document {i}");
    }
}

#[test]
fn decisions_depend_only_on_score_signs() {
    // Shifting every score by a constant too small to flip any sign leaves
    // the unconstrained decisions unchanged.
    let mut rng = ChaCha8Rng::seed_from_u64(0xF00);
    for i in 0..100 {
        let instance = random_coref_instance(&mut rng, &format!("d{i}"), &config(8));
        let smallest = instance
            .scored_pairs()
            .map(|(_, s)| s.abs())
            .filter(|s| *s > 0.0)
            .fold(f64::INFINITY, f64::min);
        if !smallest.is_finite() {
            continue;
        }
        let shift = smallest / 2.0;
        let shifted = spanlink_core::CorefInstance::new(
            instance.document_id.clone(),
            Vec::new(),
            instance.mentions.clone(),
            instance
                .scored_pairs()
                .map(|((a, b), s)| {
                    let nudged = if s > 0.0 {
                        s - shift
                    } else if s < 0.0 {
                        s + shift
                    } else {
                        0.0
                    };
                    (
                        instance.mentions[a].id.clone(),
                        instance.mentions[b].id.clone(),
                        nudged,
                    )
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(
            unconstrained_decisions(&instance),
            unconstrained_decisions(&shifted),
            "document {i}"
        );
    }
}

#[test]
fn windowed_instances_still_solve_exactly() {
    // Missing pairs are neutral; the solver may merge across them but the
    // brute-force objective must still agree.
    let mut rng = ChaCha8Rng::seed_from_u64(0xFAB);
    let windowed = CorefSynthConfig {
        max_mentions: 8,
        window: Some(2),
        missing_pair_prob: 0.2,
    };
    let budget = SolverBudget::default();
    for i in 0..200 {
        let instance = random_coref_instance(&mut rng, &format!("d{i}"), &windowed);
        let (_, report) = all_link_solve(&instance, &budget).unwrap();
        let brute = brute_force_clustering(&instance).unwrap();
        assert_eq!(report.objective, clustering_objective(&instance, &brute));
    }
}
