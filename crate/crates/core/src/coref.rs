//! Transitivity-consistent coreference clustering from pairwise link
//! scores.
//!
//! The exact solver maximizes `sum y_{i,j} s_{i,j}` subject to transitivity
//! of the binary link decisions. The feasible integer points are exactly
//! the partitions of the mention set, so the program is solved as exact
//! correlation clustering: branch and bound over sequential cluster
//! assignment with an optimistic bound of the remaining positive mass.
//! Pairs outside the scored set contribute nothing to the objective but do
//! not block transitive merges.

use crate::error::Error;
use crate::model::{Clustering, CorefInstance, LinkDecisionSet};
use crate::Result;

/// Resource limit for [`all_link_solve`].
#[derive(Debug, Clone, Copy)]
pub struct SolverBudget {
    /// Maximum branch-and-bound nodes to expand.
    pub max_nodes: u64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            max_nodes: 10_000_000,
        }
    }
}

/// Outcome bookkeeping for the exact solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    /// `sum y_{i,j} s_{i,j}` recomputed from the returned clustering.
    pub objective: f64,
    pub nodes_expanded: u64,
    /// False when the node budget ran out and the incumbent is best-found
    /// rather than proven optimal.
    pub optimal: bool,
}

/// Raw unconstrained decisions: `y = 1` iff `s > 0`. A tie at exactly zero
/// resolves to "no link".
pub fn unconstrained_decisions(instance: &CorefInstance) -> LinkDecisionSet {
    let mut decisions = LinkDecisionSet::new();
    for ((i, j), score) in instance.scored_pairs() {
        decisions.insert(
            instance.mentions[i].id.clone(),
            instance.mentions[j].id.clone(),
            score > 0.0,
        );
    }
    decisions
}

/// Objective of a clustering: the sum of scores of within-cluster scored
/// pairs, accumulated in the instance's canonical pair order.
pub fn clustering_objective(instance: &CorefInstance, clustering: &Clustering) -> f64 {
    let membership = clustering.membership();
    let mut total = 0.0;
    for ((i, j), score) in instance.scored_pairs() {
        let a = membership.get(instance.mentions[i].id.as_str());
        let b = membership.get(instance.mentions[j].id.as_str());
        if let (Some(x), Some(y)) = (a, b) {
            if x == y {
                total += score;
            }
        }
    }
    total
}

/// Link decisions induced by a clustering, restricted to the instance's
/// scored pairs. These satisfy transitivity wherever all three pairs of a
/// triple are scored.
pub fn induced_decisions(instance: &CorefInstance, clustering: &Clustering) -> LinkDecisionSet {
    let membership = clustering.membership();
    let mut decisions = LinkDecisionSet::new();
    for ((i, j), _) in instance.scored_pairs() {
        let a = instance.mentions[i].id.as_str();
        let b = instance.mentions[j].id.as_str();
        let same = match (membership.get(a), membership.get(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        };
        decisions.insert(a.to_string(), b.to_string(), same);
    }
    decisions
}

/// Exact All-Link inference: the partition of mentions maximizing the sum
/// of within-cluster pair scores.
///
/// Mentions are assigned in document order; each node either joins an
/// existing cluster or opens a new one. Children are explored by bound
/// descending (ties by cluster index), and a subtree is pruned when its
/// optimistic bound cannot strictly beat the incumbent. On budget
/// exhaustion the best incumbent is returned with `optimal: false`.
pub fn all_link_solve(
    instance: &CorefInstance,
    budget: &SolverBudget,
) -> Result<(Clustering, SolverReport)> {
    let n = instance.mentions.len();
    if n == 0 {
        return Ok((
            Clustering::new(Vec::new())?,
            SolverReport {
                objective: 0.0,
                nodes_expanded: 0,
                optimal: true,
            },
        ));
    }

    // scores[j] lists (i, s) for scored pairs with i < j.
    let mut scores: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for ((i, j), s) in instance.scored_pairs() {
        scores[j].push((i, s));
    }
    // remaining_positive[d] = sum of max(0, s) over pairs whose later
    // mention is >= d, i.e. pairs still undecided once mentions 0..d are
    // assigned.
    let mut remaining_positive = vec![0.0; n + 1];
    for d in (0..n).rev() {
        remaining_positive[d] =
            remaining_positive[d + 1] + scores[d].iter().map(|(_, s)| s.max(0.0)).sum::<f64>();
    }

    let mut search = BranchAndBound {
        scores: &scores,
        remaining_positive: &remaining_positive,
        budget: budget.max_nodes,
        nodes: 0,
        exhausted: false,
        assignment: vec![usize::MAX; n],
        cluster_count: 0,
        // The all-singleton partition (objective 0) seeds the incumbent, so
        // ties at zero resolve to it and budget exhaustion always has a
        // feasible answer.
        best: Some((0.0, (0..n).collect())),
    };
    search.descend(0, 0.0);

    let assignment = search.best.map(|(_, a)| a).expect("incumbent is seeded");
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (mention, &cluster) in assignment.iter().enumerate() {
        if cluster >= clusters.len() {
            clusters.resize_with(cluster + 1, Vec::new);
        }
        clusters[cluster].push(mention);
    }
    let clustering = Clustering::from_indices(instance, clusters)?;
    let report = SolverReport {
        objective: clustering_objective(instance, &clustering),
        nodes_expanded: search.nodes,
        optimal: !search.exhausted,
    };
    Ok((clustering, report))
}

struct BranchAndBound<'a> {
    scores: &'a [Vec<(usize, f64)>],
    remaining_positive: &'a [f64],
    budget: u64,
    nodes: u64,
    exhausted: bool,
    assignment: Vec<usize>,
    cluster_count: usize,
    best: Option<(f64, Vec<usize>)>,
}

impl BranchAndBound<'_> {
    fn descend(&mut self, depth: usize, objective: f64) {
        if depth == self.assignment.len() {
            if self
                .best
                .as_ref()
                .is_none_or(|(best, _)| objective > *best)
            {
                self.best = Some((objective, self.assignment.clone()));
            }
            return;
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;

        // Gain of joining each existing cluster; opening a new one gains 0.
        // Children are explored by gain descending; on exact ties the new
        // cluster comes first (mirroring the all-singleton default), then
        // existing clusters by index.
        let mut gains = vec![0.0; self.cluster_count + 1];
        for &(i, s) in &self.scores[depth] {
            gains[self.assignment[i]] += s;
        }
        let new_cluster = self.cluster_count;
        let mut order: Vec<usize> = (0..=self.cluster_count).collect();
        order.sort_by(|&a, &b| {
            gains[b]
                .total_cmp(&gains[a])
                .then_with(|| (a != new_cluster).cmp(&(b != new_cluster)))
                .then(a.cmp(&b))
        });

        for cluster in order {
            let child_objective = objective + gains[cluster];
            if let Some((best, _)) = &self.best {
                if child_objective + self.remaining_positive[depth + 1] <= *best {
                    continue;
                }
            }
            let opened = cluster == self.cluster_count;
            self.assignment[depth] = cluster;
            if opened {
                self.cluster_count += 1;
            }
            self.descend(depth + 1, child_objective);
            if opened {
                self.cluster_count -= 1;
            }
            self.assignment[depth] = usize::MAX;
            if self.exhausted {
                return;
            }
        }
    }
}

/// Enumerates every partition of the mentions (restricted growth strings)
/// and returns the objective-maximal one. Ties prefer more clusters, then
/// the lexicographically smallest canonical cluster signature. Rejects
/// instances with more than 10 mentions.
pub fn brute_force_clustering(instance: &CorefInstance) -> Result<Clustering> {
    let n = instance.mentions.len();
    if n > 10 {
        return Err(Error::validation(format!(
            "brute-force clustering is limited to 10 mentions, got {n}"
        )));
    }
    if n == 0 {
        return Clustering::new(Vec::new());
    }

    let mut best: Option<(f64, usize, Vec<Vec<usize>>, Vec<usize>)> = None;
    let mut assignment = vec![0usize; n];
    loop {
        let cluster_count = assignment.iter().copied().max().unwrap() + 1;
        let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); cluster_count];
        for (m, &c) in assignment.iter().enumerate() {
            clusters[c].push(m);
        }
        let mut objective = 0.0;
        for ((i, j), s) in instance.scored_pairs() {
            if assignment[i] == assignment[j] {
                objective += s;
            }
        }
        let mut signature = clusters.clone();
        signature.sort();
        let better = match &best {
            None => true,
            Some((bo, bc, bs, _)) => {
                objective > *bo
                    || (objective == *bo
                        && (cluster_count > *bc || (cluster_count == *bc && signature < *bs)))
            }
        };
        if better {
            best = Some((objective, cluster_count, signature, assignment.clone()));
        }

        // Next restricted growth string.
        let mut pos = n;
        loop {
            if pos == 1 {
                let (_, _, _, winner) = best.expect("at least one partition evaluated");
                let mut clusters: Vec<Vec<usize>> =
                    vec![Vec::new(); winner.iter().copied().max().unwrap() + 1];
                for (m, &c) in winner.iter().enumerate() {
                    clusters[c].push(m);
                }
                return Clustering::from_indices(instance, clusters);
            }
            pos -= 1;
            let prefix_max = assignment[..pos].iter().copied().max().unwrap();
            if assignment[pos] <= prefix_max {
                assignment[pos] += 1;
                for v in assignment[pos + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Right-to-left cluster assignment: scanning mentions in document order,
/// each mention joins the cluster of the closest preceding mention with a
/// positive link decision, otherwise it starts a new cluster.
pub fn r2l_assign(instance: &CorefInstance, decisions: &LinkDecisionSet) -> Clustering {
    let n = instance.mentions.len();
    let mut assignment: Vec<usize> = Vec::with_capacity(n);
    let mut cluster_count = 0;
    for j in 0..n {
        let mut joined = None;
        for i in (0..j).rev() {
            let linked = decisions
                .get(&instance.mentions[i].id, &instance.mentions[j].id)
                .unwrap_or(false);
            if linked {
                joined = Some(assignment[i]);
                break;
            }
        }
        match joined {
            Some(cluster) => assignment.push(cluster),
            None => {
                assignment.push(cluster_count);
                cluster_count += 1;
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); cluster_count];
    for (m, &c) in assignment.iter().enumerate() {
        clusters[c].push(m);
    }
    Clustering::from_indices(instance, clusters).expect("scan produces a valid partition")
}

/// All mentions in a single cluster.
pub fn baseline_all_yes(instance: &CorefInstance) -> Clustering {
    if instance.mentions.is_empty() {
        return Clustering::new(Vec::new()).expect("empty clustering is valid");
    }
    Clustering::new(vec![instance.mentions.iter().map(|m| m.id.clone()).collect()])
        .expect("single cluster is a valid partition")
}

/// Every mention its own cluster.
pub fn baseline_all_no(instance: &CorefInstance) -> Clustering {
    Clustering::singletons(instance.mentions.iter().map(|m| m.id.clone()))
}
