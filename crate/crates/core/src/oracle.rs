//! Brute-force reference implementations.
//!
//! These deliberately avoid the production algorithms: paths are found by
//! exhaustive DFS rather than Yen's deviations and optimal structures by
//! enumerating candidate combinations rather than graph search. They exist
//! to cross-check the solvers on small inputs and are exercised heavily by
//! the acceptance suite.

use std::collections::BTreeMap;

use crate::model::{spans_overlap, SrlInstance, TokenSpan};
use crate::srl::{locate_span_occurrences_with, path_order, GraphPath, MatchOptions, SpanGraph};

/// Every loopless source-to-sink path of the graph, ordered by
/// [`path_order`]. Intended for small graphs; the count grows
/// combinatorially.
pub fn enumerate_all_paths(graph: &SpanGraph) -> Vec<GraphPath> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); graph.vertex_count];
    for (id, edge) in graph.edges.iter().enumerate() {
        adjacency[edge.from].push(id);
    }
    let mut paths = Vec::new();
    let mut stack = Vec::new();
    dfs(graph, &adjacency, 0, &mut stack, &mut paths);
    let mut paths: Vec<GraphPath> = paths
        .into_iter()
        .map(|edges| {
            let total_weight = graph.path_weight(&edges);
            GraphPath {
                edges,
                total_weight,
            }
        })
        .collect();
    paths.sort_by(|a, b| path_order(graph, a, b));
    paths
}

fn dfs(
    graph: &SpanGraph,
    adjacency: &[Vec<usize>],
    vertex: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if vertex == graph.sink() {
        out.push(stack.clone());
        return;
    }
    for &edge_id in &adjacency[vertex] {
        stack.push(edge_id);
        dfs(graph, adjacency, graph.edges[edge_id].to, stack, out);
        stack.pop();
    }
}

/// A complete assignment found by exhaustive search: one located candidate
/// occurrence per assignable role, pairwise non-overlapping, minimizing the
/// summed score gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveSrlOptimum {
    /// Total cost, summed over chosen spans in left-to-right order (the
    /// same order a graph path accumulates weights in).
    pub cost: f64,
    pub assignments: BTreeMap<String, (TokenSpan, String)>,
}

/// Exhaustively searches all candidate-occurrence combinations over the
/// roles that have at least one locatable candidate. Returns `None` when no
/// complete non-overlapping assignment exists. Candidate weights are
/// derived directly from the instance scores, independent of the graph.
pub fn srl_exhaustive_optimum(
    instance: &SrlInstance,
    top_n: usize,
    options: &MatchOptions,
) -> Option<ExhaustiveSrlOptimum> {
    // Per assignable role: (span, weight, candidate text) choices.
    let mut per_role: Vec<(String, Vec<(TokenSpan, f64, String)>)> = Vec::new();
    for role in &instance.roles {
        let mut choices = Vec::new();
        let mut best_located: Option<f64> = None;
        for cand in role.candidates.iter().take(top_n) {
            let occs = locate_span_occurrences_with(&instance.sentence_tokens, &cand.text, options);
            if occs.is_empty() {
                continue;
            }
            let base = *best_located.get_or_insert(cand.score);
            for span in occs {
                choices.push((span, base - cand.score, cand.text.clone()));
            }
        }
        if !choices.is_empty() {
            per_role.push((role.role_id.clone(), choices));
        }
    }
    if per_role.is_empty() {
        return Some(ExhaustiveSrlOptimum {
            cost: 0.0,
            assignments: BTreeMap::new(),
        });
    }

    let mut best: Option<ExhaustiveSrlOptimum> = None;
    let mut chosen: Vec<usize> = Vec::new();
    search(&per_role, 0, &mut chosen, &mut best);
    best
}

fn search(
    per_role: &[(String, Vec<(TokenSpan, f64, String)>)],
    depth: usize,
    chosen: &mut Vec<usize>,
    best: &mut Option<ExhaustiveSrlOptimum>,
) {
    if depth == per_role.len() {
        let mut picks: Vec<(TokenSpan, f64, &str, &str)> = chosen
            .iter()
            .enumerate()
            .map(|(r, &c)| {
                let (span, w, text) = &per_role[r].1[c];
                (*span, *w, per_role[r].0.as_str(), text.as_str())
            })
            .collect();
        picks.sort_by_key(|(span, ..)| (span.start, span.end));
        let cost: f64 = picks.iter().map(|(_, w, ..)| *w).sum();
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            *best = Some(ExhaustiveSrlOptimum {
                cost,
                assignments: picks
                    .into_iter()
                    .map(|(span, _, role, text)| (role.to_string(), (span, text.to_string())))
                    .collect(),
            });
        }
        return;
    }
    'choice: for c in 0..per_role[depth].1.len() {
        let span = per_role[depth].1[c].0;
        for (r, &prev) in chosen.iter().enumerate() {
            if spans_overlap(span, per_role[r].1[prev].0) {
                continue 'choice;
            }
        }
        chosen.push(c);
        search(per_role, depth + 1, chosen, best);
        chosen.pop();
    }
}
