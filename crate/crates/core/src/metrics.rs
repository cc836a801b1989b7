//! Evaluation math for both tasks.
//!
//! SRL: exact and head accuracy at the question and structure level, plus
//! the overlap inconsistency percent. Coreference: pairwise F1 over the
//! scored link decisions, MUC, B³, CEAF_e, their CoNLL average, and the
//! conditional-violation inconsistency percent.
//!
//! Per-document counts are plain additive structs so corpus-level numbers
//! are micro-averaged by summing counts in document order before the final
//! division.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::Error;
use crate::model::{spans_overlap, Clustering, LinkDecisionSet, SrlGold, SrlStructure};
use crate::Result;

pub mod assignment;

/// Precision / recall / F1 as fractions in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PrF1 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl PrF1 {
    /// Builds from numerators and denominators; zero denominators and the
    /// 0/0 F1 case yield 0.0 with a diagnostic flag instead of NaN.
    fn from_fractions(
        p_num: f64,
        p_den: f64,
        r_num: f64,
        r_den: f64,
        name: &str,
        flags: &mut Vec<String>,
    ) -> PrF1 {
        let precision = if p_den > 0.0 {
            p_num / p_den
        } else {
            flags.push(format!("{name}_precision_denominator_zero"));
            0.0
        };
        let recall = if r_den > 0.0 {
            r_num / r_den
        } else {
            flags.push(format!("{name}_recall_denominator_zero"));
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            flags.push(format!("{name}_f1_degenerate"));
            0.0
        };
        PrF1 {
            precision,
            recall,
            f1,
        }
    }
}

/// Finds the head token of a span's surface text.
///
/// The default surface heuristic is deliberately parser-free; a syntactic
/// head finder can be plugged in instead.
pub trait HeadFinder {
    fn head_of(&self, span_text: &str) -> String;
}

/// Deterministic surface heuristic: drop trailing punctuation tokens, drop
/// leading determiners (a, an, the), return the last remaining token
/// case-folded. If stripping empties the text, the original last token is
/// returned case-folded.
#[derive(Debug, Clone, Copy, Default)]
pub struct SurfaceHeadFinder;

impl HeadFinder for SurfaceHeadFinder {
    fn head_of(&self, span_text: &str) -> String {
        let tokens: Vec<&str> = span_text.split_whitespace().collect();
        if tokens.is_empty() {
            return String::new();
        }
        let mut slice = &tokens[..];
        while let Some(last) = slice.last() {
            if !last.is_empty() && last.chars().all(|c| c.is_ascii_punctuation()) {
                slice = &slice[..slice.len() - 1];
            } else {
                break;
            }
        }
        while let Some(first) = slice.first() {
            if matches!(first.to_lowercase().as_str(), "a" | "an" | "the") {
                slice = &slice[1..];
            } else {
                break;
            }
        }
        match slice.last() {
            Some(head) => head.to_lowercase(),
            None => tokens.last().unwrap().to_lowercase(),
        }
    }
}

/// [`SurfaceHeadFinder`] as a plain function.
pub fn head_of(span_text: &str) -> String {
    SurfaceHeadFinder.head_of(span_text)
}

/// Question- and structure-level accuracy counts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SrlAccuracy {
    pub questions: usize,
    pub exact_q_correct: usize,
    pub head_q_correct: usize,
    pub structures: usize,
    pub exact_s_correct: usize,
    pub head_s_correct: usize,
}

impl SrlAccuracy {
    pub fn exact_q(&self) -> f64 {
        percent(self.exact_q_correct, self.questions)
    }
    pub fn head_q(&self) -> f64 {
        percent(self.head_q_correct, self.questions)
    }
    pub fn exact_s(&self) -> f64 {
        percent(self.exact_s_correct, self.structures)
    }
    pub fn head_s(&self) -> f64 {
        percent(self.head_s_correct, self.structures)
    }
}

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

fn normalize_ws(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Scores aligned predictions against gold answers.
///
/// Predictions and golds are aligned by instance id and role id; any
/// mismatch is rejected listing the offending ids. A question counts as
/// exact-correct when the predicted text equals any gold answer after
/// whitespace normalization, and head-correct when the heads match.
/// Unassigned roles count as incorrect. A structure is correct only if
/// every gold role of its instance is correct.
pub fn srl_eval(
    preds: &[(String, SrlStructure)],
    golds: &[SrlGold],
    head_finder: &dyn HeadFinder,
) -> Result<SrlAccuracy> {
    let pred_by_id: HashMap<&str, &SrlStructure> =
        preds.iter().map(|(id, s)| (id.as_str(), s)).collect();
    if pred_by_id.len() != preds.len() {
        return Err(Error::validation("duplicate instance ids in predictions"));
    }
    let gold_ids: HashSet<&str> = golds.iter().map(|g| g.instance_id.as_str()).collect();
    if gold_ids.len() != golds.len() {
        return Err(Error::validation("duplicate instance ids in gold"));
    }
    let missing: Vec<&str> = golds
        .iter()
        .map(|g| g.instance_id.as_str())
        .filter(|id| !pred_by_id.contains_key(id))
        .collect();
    let extra: Vec<&str> = preds
        .iter()
        .map(|(id, _)| id.as_str())
        .filter(|id| !gold_ids.contains(id))
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::validation(format!(
            "prediction/gold misalignment: missing predictions for {missing:?}, \
             predictions without gold for {extra:?}"
        )));
    }

    let mut acc = SrlAccuracy::default();
    for gold in golds {
        let structure = pred_by_id[gold.instance_id.as_str()];
        let mut all_exact = true;
        let mut all_head = true;
        for role in &gold.roles {
            let Some(assignment) = structure.assignments.get(&role.role_id) else {
                return Err(Error::validation(format!(
                    "instance {}: prediction lacks role {:?}",
                    gold.instance_id, role.role_id
                )));
            };
            acc.questions += 1;
            let (exact, head) = match assignment {
                Some(a) => {
                    let pred_text = normalize_ws(&a.text);
                    let pred_head = head_finder.head_of(&a.text);
                    let exact = role.answers.iter().any(|g| normalize_ws(g) == pred_text);
                    let head = role
                        .answers
                        .iter()
                        .any(|g| head_finder.head_of(g) == pred_head);
                    (exact, head)
                }
                None => (false, false),
            };
            acc.exact_q_correct += exact as usize;
            acc.head_q_correct += head as usize;
            all_exact &= exact;
            all_head &= head;
        }
        acc.structures += 1;
        acc.exact_s_correct += all_exact as usize;
        acc.head_s_correct += all_head as usize;
    }
    Ok(acc)
}

/// Overlap-inconsistency counts for predicted SRL structures.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SrlRho {
    /// Pairs of assigned spans within one structure.
    pub comparable_pairs: usize,
    pub violating_pairs: usize,
    pub structures: usize,
    pub violating_structures: usize,
}

impl SrlRho {
    pub fn rho_pair(&self) -> f64 {
        percent(self.violating_pairs, self.comparable_pairs)
    }
    pub fn rho_structure(&self) -> f64 {
        percent(self.violating_structures, self.structures)
    }
}

/// Compares every pair of assigned spans within each structure; a
/// violation is a pair that overlaps. Structures with fewer than two
/// assigned spans contribute no pairs.
pub fn rho_srl(preds: &[SrlStructure]) -> SrlRho {
    let mut rho = SrlRho::default();
    for structure in preds {
        let spans: Vec<_> = structure.assigned_spans().collect();
        let mut violated = false;
        for i in 0..spans.len() {
            for j in (i + 1)..spans.len() {
                rho.comparable_pairs += 1;
                if spans_overlap(spans[i], spans[j]) {
                    rho.violating_pairs += 1;
                    violated = true;
                }
            }
        }
        rho.structures += 1;
        rho.violating_structures += violated as usize;
    }
    rho
}

/// Full SRL report: accuracy percentages plus both inconsistency variants.
/// The pair-level figure is the headline rho.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SrlEvalReport {
    pub exact_q: f64,
    pub exact_s: f64,
    pub head_q: f64,
    pub head_s: f64,
    pub rho_pair: f64,
    pub rho_structure: f64,
    pub questions: usize,
    pub structures: usize,
    pub violating_pairs: usize,
    pub comparable_pairs: usize,
}

pub fn srl_report(accuracy: &SrlAccuracy, rho: &SrlRho) -> SrlEvalReport {
    SrlEvalReport {
        exact_q: accuracy.exact_q(),
        exact_s: accuracy.exact_s(),
        head_q: accuracy.head_q(),
        head_s: accuracy.head_s(),
        rho_pair: rho.rho_pair(),
        rho_structure: rho.rho_structure(),
        questions: accuracy.questions,
        structures: accuracy.structures,
        violating_pairs: rho.violating_pairs,
        comparable_pairs: rho.comparable_pairs,
    }
}

/// Positive-class counts for link-decision F1.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairwiseCounts {
    pub true_positive: usize,
    pub predicted_positive: usize,
    pub gold_positive: usize,
}

impl PairwiseCounts {
    pub fn add(&mut self, other: &PairwiseCounts) {
        self.true_positive += other.true_positive;
        self.predicted_positive += other.predicted_positive;
        self.gold_positive += other.gold_positive;
    }

    pub fn prf1(&self, flags: &mut Vec<String>) -> PrF1 {
        PrF1::from_fractions(
            self.true_positive as f64,
            self.predicted_positive as f64,
            self.true_positive as f64,
            self.gold_positive as f64,
            "pairwise",
            flags,
        )
    }
}

/// Counts the binary link decisions against gold cluster membership,
/// evaluated over the scored pairs only.
pub fn pairwise_counts(decisions: &LinkDecisionSet, gold: &Clustering) -> Result<PairwiseCounts> {
    let membership = gold.membership();
    let mut counts = PairwiseCounts::default();
    for (a, b, y) in decisions.iter() {
        let (Some(ca), Some(cb)) = (membership.get(a), membership.get(b)) else {
            return Err(Error::validation(format!(
                "pair ({a:?}, {b:?}) references a mention outside the gold clustering"
            )));
        };
        let gold_link = ca == cb;
        counts.predicted_positive += y as usize;
        counts.gold_positive += gold_link as usize;
        counts.true_positive += (y && gold_link) as usize;
    }
    Ok(counts)
}

/// Standard precision/recall/F1 of the positive link class.
pub fn pairwise_f1(
    decisions: &LinkDecisionSet,
    gold: &Clustering,
) -> Result<(PrF1, Vec<String>)> {
    let counts = pairwise_counts(decisions, gold)?;
    let mut flags = Vec::new();
    let prf1 = counts.prf1(&mut flags);
    Ok((prf1, flags))
}

/// Conditional-violation counts for transitivity.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RhoCorefCounts {
    /// Triple instantiations where both antecedent links are positive.
    pub antecedents: usize,
    /// Antecedent instantiations whose third link is negative.
    pub violations: usize,
}

impl RhoCorefCounts {
    pub fn add(&mut self, other: &RhoCorefCounts) {
        self.antecedents += other.antecedents;
        self.violations += other.violations;
    }

    pub fn rho(&self) -> f64 {
        percent(self.violations, self.antecedents)
    }
}

/// Counts transitivity violations over the fully scored triples: for each
/// unordered mention triple with all three pairs scored and each choice of
/// shared mention `j`, the antecedent is `y_{i,j} and y_{j,k}` and the
/// violation is the antecedent holding while `y_{i,k}` is negative. With a
/// zero denominator the rho is 0 and flagged by the report builder.
pub fn rho_coref_counts(decisions: &LinkDecisionSet) -> RhoCorefCounts {
    let universe = decisions.mention_universe();
    let mut counts = RhoCorefCounts::default();
    for i in 0..universe.len() {
        for j in (i + 1)..universe.len() {
            for k in (j + 1)..universe.len() {
                let (a, b, c) = (universe[i], universe[j], universe[k]);
                let (Some(ab), Some(bc), Some(ac)) =
                    (decisions.get(a, b), decisions.get(b, c), decisions.get(a, c))
                else {
                    continue;
                };
                for (first, second, third) in [(ab, bc, ac), (ab, ac, bc), (ac, bc, ab)] {
                    if first && second {
                        counts.antecedents += 1;
                        counts.violations += !third as usize;
                    }
                }
            }
        }
    }
    counts
}

/// Conditional-violation percent of a decision set.
pub fn rho_coref(decisions: &LinkDecisionSet) -> f64 {
    rho_coref_counts(decisions).rho()
}

/// MUC link counts (Vilain et al. style).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MucCounts {
    pub recall_num: usize,
    pub recall_den: usize,
    pub precision_num: usize,
    pub precision_den: usize,
}

impl MucCounts {
    pub fn add(&mut self, other: &MucCounts) {
        self.recall_num += other.recall_num;
        self.recall_den += other.recall_den;
        self.precision_num += other.precision_num;
        self.precision_den += other.precision_den;
    }

    pub fn prf1(&self, flags: &mut Vec<String>) -> PrF1 {
        PrF1::from_fractions(
            self.precision_num as f64,
            self.precision_den as f64,
            self.recall_num as f64,
            self.recall_den as f64,
            "muc",
            flags,
        )
    }
}

fn check_same_universe(pred: &Clustering, gold: &Clustering) -> Result<()> {
    let p: BTreeSet<&str> = pred.mention_ids().collect();
    let g: BTreeSet<&str> = gold.mention_ids().collect();
    if p != g {
        return Err(Error::validation(format!(
            "clusterings cover different mention universes \
             (pred has {} mentions, gold has {})",
            p.len(),
            g.len()
        )));
    }
    Ok(())
}

/// One direction of the MUC count: sum over `by` clusters of cluster size
/// minus the number of `of` clusters partitioning it.
fn muc_direction(by: &Clustering, of: &Clustering) -> (usize, usize) {
    let membership = of.membership();
    let mut num = 0;
    let mut den = 0;
    for cluster in by.clusters() {
        let parts: HashSet<usize> = cluster.iter().map(|m| membership[m.as_str()]).collect();
        num += cluster.len() - parts.len();
        den += cluster.len() - 1;
    }
    (num, den)
}

pub fn muc_counts(pred: &Clustering, gold: &Clustering) -> Result<MucCounts> {
    check_same_universe(pred, gold)?;
    let (recall_num, recall_den) = muc_direction(gold, pred);
    let (precision_num, precision_den) = muc_direction(pred, gold);
    Ok(MucCounts {
        recall_num,
        recall_den,
        precision_num,
        precision_den,
    })
}

pub fn muc(pred: &Clustering, gold: &Clustering) -> Result<(PrF1, Vec<String>)> {
    let counts = muc_counts(pred, gold)?;
    let mut flags = Vec::new();
    let prf1 = counts.prf1(&mut flags);
    Ok((prf1, flags))
}

/// B³ per-mention sums.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BCubedCounts {
    pub precision_sum: f64,
    pub recall_sum: f64,
    pub mentions: usize,
}

impl BCubedCounts {
    pub fn add(&mut self, other: &BCubedCounts) {
        self.precision_sum += other.precision_sum;
        self.recall_sum += other.recall_sum;
        self.mentions += other.mentions;
    }

    pub fn prf1(&self, flags: &mut Vec<String>) -> PrF1 {
        PrF1::from_fractions(
            self.precision_sum,
            self.mentions as f64,
            self.recall_sum,
            self.mentions as f64,
            "b_cubed",
            flags,
        )
    }
}

pub fn b_cubed_counts(pred: &Clustering, gold: &Clustering) -> Result<BCubedCounts> {
    check_same_universe(pred, gold)?;
    let pred_membership = pred.membership();
    let gold_membership = gold.membership();
    let mut counts = BCubedCounts::default();
    // Mentions iterate in gold canonical order; summation order is fixed.
    for mention in gold.mention_ids() {
        let pred_cluster = &pred.clusters()[pred_membership[mention]];
        let gold_cluster = &gold.clusters()[gold_membership[mention]];
        let overlap = pred_cluster
            .iter()
            .filter(|m| gold_membership[m.as_str()] == gold_membership[mention])
            .count();
        counts.precision_sum += overlap as f64 / pred_cluster.len() as f64;
        counts.recall_sum += overlap as f64 / gold_cluster.len() as f64;
        counts.mentions += 1;
    }
    Ok(counts)
}

pub fn b_cubed(pred: &Clustering, gold: &Clustering) -> Result<(PrF1, Vec<String>)> {
    let counts = b_cubed_counts(pred, gold)?;
    let mut flags = Vec::new();
    let prf1 = counts.prf1(&mut flags);
    Ok((prf1, flags))
}

/// CEAF_e alignment sums.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CeafECounts {
    /// Optimal one-to-one alignment value, `sum phi4(K, R)`.
    pub phi_sum: f64,
    pub pred_clusters: usize,
    pub gold_clusters: usize,
}

impl CeafECounts {
    pub fn add(&mut self, other: &CeafECounts) {
        self.phi_sum += other.phi_sum;
        self.pred_clusters += other.pred_clusters;
        self.gold_clusters += other.gold_clusters;
    }

    pub fn prf1(&self, flags: &mut Vec<String>) -> PrF1 {
        PrF1::from_fractions(
            self.phi_sum,
            self.pred_clusters as f64,
            self.phi_sum,
            self.gold_clusters as f64,
            "ceaf_e",
            flags,
        )
    }
}

/// Entity-similarity `phi4(K, R) = 2|K ∩ R| / (|K| + |R|)`, maximized over
/// one-to-one cluster alignments by an optimal-assignment subroutine.
pub fn ceaf_e_counts(pred: &Clustering, gold: &Clustering) -> Result<CeafECounts> {
    check_same_universe(pred, gold)?;
    let pred_membership = pred.membership();
    let mut similarity =
        vec![vec![0.0; pred.clusters().len()]; gold.clusters().len()];
    for (gi, gold_cluster) in gold.clusters().iter().enumerate() {
        let mut overlap = vec![0usize; pred.clusters().len()];
        for mention in gold_cluster {
            overlap[pred_membership[mention.as_str()]] += 1;
        }
        for (pi, &o) in overlap.iter().enumerate() {
            if o > 0 {
                similarity[gi][pi] =
                    2.0 * o as f64 / (gold_cluster.len() + pred.clusters()[pi].len()) as f64;
            }
        }
    }
    let phi_sum = if similarity.is_empty() || pred.clusters().is_empty() {
        0.0
    } else {
        assignment::max_assignment(&similarity).0
    };
    Ok(CeafECounts {
        phi_sum,
        pred_clusters: pred.clusters().len(),
        gold_clusters: gold.clusters().len(),
    })
}

pub fn ceaf_e(pred: &Clustering, gold: &Clustering) -> Result<(PrF1, Vec<String>)> {
    let counts = ceaf_e_counts(pred, gold)?;
    let mut flags = Vec::new();
    let prf1 = counts.prf1(&mut flags);
    Ok((prf1, flags))
}

/// CoNLL score: arithmetic mean of the three F1 fractions, as a percent.
pub fn conll_avg(muc_f1: f64, b3_f1: f64, ceafe_f1: f64) -> f64 {
    (muc_f1 + b3_f1 + ceafe_f1) / 3.0 * 100.0
}

/// Everything evaluated for a coreference run. Cluster metrics are absent
/// when the predictions are raw link decisions without a clustering.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CorefEvalReport {
    pub pairwise: PrF1,
    pub muc: Option<PrF1>,
    pub b_cubed: Option<PrF1>,
    pub ceaf_e: Option<PrF1>,
    /// Percent; present iff the cluster metrics are.
    pub conll: Option<f64>,
    /// Conditional-violation percent of the predicted decisions.
    pub rho: f64,
    pub scored_pairs: usize,
    pub flags: Vec<String>,
}

/// One document's inputs to corpus-level coreference evaluation.
pub struct CorefDocEval<'a> {
    pub decisions: &'a LinkDecisionSet,
    /// Present for solvers that produce clusters; absent for raw decisions.
    pub pred_clustering: Option<&'a Clustering>,
    pub gold: &'a Clustering,
}

/// Micro-averaged corpus evaluation: counts are summed over documents in
/// input order, then turned into percentages once.
pub fn evaluate_coref(docs: &[CorefDocEval<'_>]) -> Result<CorefEvalReport> {
    let with_clusters = docs.iter().filter(|d| d.pred_clustering.is_some()).count();
    if with_clusters != 0 && with_clusters != docs.len() {
        return Err(Error::validation(
            "mixed predictions: some documents have clusterings, some only decisions",
        ));
    }

    let mut pairwise = PairwiseCounts::default();
    let mut rho = RhoCorefCounts::default();
    let mut muc_acc = MucCounts::default();
    let mut b3_acc = BCubedCounts::default();
    let mut ceafe_acc = CeafECounts::default();
    let mut scored_pairs = 0;
    for doc in docs {
        pairwise.add(&pairwise_counts(doc.decisions, doc.gold)?);
        rho.add(&rho_coref_counts(doc.decisions));
        scored_pairs += doc.decisions.len();
        if let Some(pred) = doc.pred_clustering {
            muc_acc.add(&muc_counts(pred, doc.gold)?);
            b3_acc.add(&b_cubed_counts(pred, doc.gold)?);
            ceafe_acc.add(&ceaf_e_counts(pred, doc.gold)?);
        }
    }

    let mut flags = Vec::new();
    let pairwise = pairwise.prf1(&mut flags);
    if rho.antecedents == 0 {
        flags.push("rho_no_antecedents".into());
    }
    let (muc, b_cubed, ceaf_e, conll) = if with_clusters > 0 {
        let muc = muc_acc.prf1(&mut flags);
        let b3 = b3_acc.prf1(&mut flags);
        let ceafe = ceafe_acc.prf1(&mut flags);
        let conll = conll_avg(muc.f1, b3.f1, ceafe.f1);
        (Some(muc), Some(b3), Some(ceafe), Some(conll))
    } else {
        (None, None, None, None)
    };
    Ok(CorefEvalReport {
        pairwise,
        muc,
        b_cubed,
        ceaf_e,
        conll,
        rho: rho.rho(),
        scored_pairs,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GoldRole, SpanAssignment, TokenSpan};
    use std::collections::BTreeMap;

    fn clustering(clusters: &[&[&str]]) -> Clustering {
        Clustering::new(
            clusters
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
        .unwrap()
    }

    /// The 4-mention worked example used throughout.
    fn worked_example() -> (Clustering, Clustering) {
        let gold = clustering(&[&["a", "b", "c"], &["d"]]);
        let pred = clustering(&[&["a", "b"], &["c", "d"]]);
        (pred, gold)
    }

    #[test]
    fn head_of_examples() {
        assert_eq!(head_of("the sword"), "sword");
        assert_eq!(head_of("Elrond"), "elrond");
        assert_eq!(head_of("lifelong career in medicine"), "medicine");
        // Determiner plus punctuation empties the slice; the original last
        // token wins.
        assert_eq!(head_of("a , ."), ".");
    }

    #[test]
    fn head_of_strips_trailing_punctuation_tokens() {
        assert_eq!(head_of("the sword ."), "sword");
        assert_eq!(head_of("An Apple !"), "apple");
    }

    #[test]
    fn head_of_empty_after_stripping_falls_back() {
        // Only a determiner: stripping empties the list, fall back to the
        // original last token, case-folded.
        assert_eq!(head_of("The"), "the");
        assert_eq!(head_of(". !"), "!");
    }

    fn structure(roles: &[(&str, Option<(&str, usize, usize)>)]) -> SrlStructure {
        let assignments: BTreeMap<String, Option<SpanAssignment>> = roles
            .iter()
            .map(|(id, a)| {
                (
                    id.to_string(),
                    a.map(|(text, s, e)| SpanAssignment {
                        span: TokenSpan::new(s, e),
                        text: text.to_string(),
                    }),
                )
            })
            .collect();
        SrlStructure {
            assignments,
            total_cost: 0.0,
        }
    }

    fn gold(id: &str, roles: &[(&str, &[&str])]) -> SrlGold {
        SrlGold {
            instance_id: id.to_string(),
            roles: roles
                .iter()
                .map(|(role_id, answers)| GoldRole {
                    role_id: role_id.to_string(),
                    answers: answers.iter().map(|a| a.to_string()).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn srl_eval_all_correct() {
        let preds = vec![(
            "i1".to_string(),
            structure(&[("a", Some(("x", 0, 1))), ("b", Some(("y z", 1, 3)))]),
        )];
        let golds = vec![gold("i1", &[("a", &["x"]), ("b", &["y z"])])];
        let acc = srl_eval(&preds, &golds, &SurfaceHeadFinder).unwrap();
        assert_eq!(acc.exact_q(), 100.0);
        assert_eq!(acc.exact_s(), 100.0);
        assert_eq!(acc.head_q(), 100.0);
        assert_eq!(acc.head_s(), 100.0);
    }

    #[test]
    fn srl_eval_counts_one_wrong_role() {
        // Two structures x two roles, one role wrong in one structure.
        let preds = vec![
            (
                "i1".to_string(),
                structure(&[("a", Some(("x", 0, 1))), ("b", Some(("wrong", 1, 2)))]),
            ),
            (
                "i2".to_string(),
                structure(&[("a", Some(("x", 0, 1))), ("b", Some(("y", 1, 2)))]),
            ),
        ];
        let golds = vec![
            gold("i1", &[("a", &["x"]), ("b", &["y"])]),
            gold("i2", &[("a", &["x"]), ("b", &["y"])]),
        ];
        let acc = srl_eval(&preds, &golds, &SurfaceHeadFinder).unwrap();
        assert_eq!(acc.exact_q(), 75.0);
        assert_eq!(acc.exact_s(), 50.0);
    }

    #[test]
    fn srl_eval_head_vs_exact_divergence() {
        // Prediction differs exactly but shares the head.
        let preds = vec![(
            "i1".to_string(),
            structure(&[("a", Some(("the sword", 3, 5)))]),
        )];
        let golds = vec![gold("i1", &[("a", &["sword"])])];
        let acc = srl_eval(&preds, &golds, &SurfaceHeadFinder).unwrap();
        assert_eq!(acc.exact_q(), 0.0);
        assert_eq!(acc.head_q(), 100.0);
    }

    #[test]
    fn srl_eval_generated_answer_fails_both() {
        let preds = vec![(
            "i1".to_string(),
            structure(&[("a", Some(("financial security", 0, 2)))]),
        )];
        let golds = vec![gold("i1", &[("a", &["lifelong career in medicine"])])];
        let acc = srl_eval(&preds, &golds, &SurfaceHeadFinder).unwrap();
        assert_eq!(acc.exact_q(), 0.0);
        assert_eq!(acc.head_q(), 0.0);
    }

    #[test]
    fn srl_eval_unassigned_counts_incorrect() {
        let preds = vec![("i1".to_string(), structure(&[("a", None)]))];
        let golds = vec![gold("i1", &[("a", &["x"])])];
        let acc = srl_eval(&preds, &golds, &SurfaceHeadFinder).unwrap();
        assert_eq!(acc.exact_q(), 0.0);
        assert_eq!(acc.head_q(), 0.0);
    }

    #[test]
    fn srl_eval_rejects_misalignment() {
        let preds = vec![("i1".to_string(), structure(&[("a", None)]))];
        let golds = vec![gold("i2", &[("a", &["x"])])];
        let err = srl_eval(&preds, &golds, &SurfaceHeadFinder).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("i2") && msg.contains("i1"), "{msg}");
    }

    #[test]
    fn rho_srl_single_violating_pair() {
        let s = structure(&[("a", Some(("x y", 0, 2))), ("b", Some(("y z", 1, 3)))]);
        let rho = rho_srl(&[s]);
        assert_eq!(rho.rho_pair(), 100.0);
        assert_eq!(rho.rho_structure(), 100.0);
    }

    #[test]
    fn rho_srl_mixed_counts() {
        // Three 3-span structures (3 pairs each); one has 1 violating pair.
        let clean = structure(&[
            ("a", Some(("t", 0, 1))),
            ("b", Some(("u", 1, 2))),
            ("c", Some(("v", 2, 3))),
        ]);
        let dirty = structure(&[
            ("a", Some(("t u", 0, 2))),
            ("b", Some(("u", 1, 2))),
            ("c", Some(("v", 4, 5))),
        ]);
        let rho = rho_srl(&[clean.clone(), dirty, clean]);
        assert_eq!(rho.comparable_pairs, 9);
        assert_eq!(rho.violating_pairs, 1);
        assert!((rho.rho_pair() - 100.0 / 9.0).abs() < 1e-12);
        assert!((rho.rho_structure() - 100.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rho_srl_short_structures_contribute_no_pairs() {
        let s = structure(&[("a", Some(("x", 0, 1))), ("b", None)]);
        let rho = rho_srl(&[s]);
        assert_eq!(rho.comparable_pairs, 0);
        assert_eq!(rho.rho_pair(), 0.0);
    }

    fn decisions(pairs: &[(&str, &str, bool)]) -> LinkDecisionSet {
        let mut d = LinkDecisionSet::new();
        for (a, b, y) in pairs {
            d.insert(a.to_string(), b.to_string(), *y);
        }
        d
    }

    #[test]
    fn pairwise_f1_hand_count() {
        let gold = clustering(&[&["m1", "m2", "m3"]]);
        let d = decisions(&[("m1", "m2", true), ("m1", "m3", false), ("m2", "m3", false)]);
        let (prf1, flags) = pairwise_f1(&d, &gold).unwrap();
        assert_eq!(prf1.precision, 1.0);
        assert!((prf1.recall - 1.0 / 3.0).abs() < 1e-12);
        assert!((prf1.f1 - 0.5).abs() < 1e-12);
        assert!(flags.is_empty());
    }

    #[test]
    fn pairwise_f1_perfect_on_induced() {
        let gold = clustering(&[&["m1", "m2"], &["m3"]]);
        let d = decisions(&[("m1", "m2", true), ("m1", "m3", false), ("m2", "m3", false)]);
        let (prf1, _) = pairwise_f1(&d, &gold).unwrap();
        assert_eq!(prf1.f1, 1.0);
    }

    #[test]
    fn pairwise_f1_degenerate_flagged() {
        // All-yes against all-singleton gold: precision 0; and the no-pred,
        // no-gold case flags the 0/0.
        let gold = clustering(&[&["m1"], &["m2"]]);
        let all_yes = decisions(&[("m1", "m2", true)]);
        let (prf1, flags) = pairwise_f1(&all_yes, &gold).unwrap();
        assert_eq!(prf1.precision, 0.0);
        assert_eq!(prf1.f1, 0.0);
        assert!(!flags.is_empty());

        let all_no = decisions(&[("m1", "m2", false)]);
        let (prf1, flags) = pairwise_f1(&all_no, &gold).unwrap();
        assert_eq!(prf1.f1, 0.0);
        assert!(flags.iter().any(|f| f.contains("degenerate")));
    }

    #[test]
    fn rho_coref_single_triangle() {
        let d = decisions(&[("m1", "m2", true), ("m2", "m3", true), ("m1", "m3", false)]);
        let counts = rho_coref_counts(&d);
        assert_eq!(counts.antecedents, 1);
        assert_eq!(counts.violations, 1);
        assert_eq!(rho_coref(&d), 100.0);
    }

    #[test]
    fn rho_coref_clique_consistent() {
        let ids = ["m1", "m2", "m3", "m4"];
        let mut d = LinkDecisionSet::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                d.insert(ids[i].to_string(), ids[j].to_string(), true);
            }
        }
        let counts = rho_coref_counts(&d);
        assert_eq!(counts.antecedents, 12);
        assert_eq!(counts.violations, 0);
        assert_eq!(rho_coref(&d), 0.0);
    }

    #[test]
    fn rho_coref_skips_unscored_triples() {
        // Third pair missing: no triple has all three pairs scored.
        let d = decisions(&[("m1", "m2", true), ("m2", "m3", true)]);
        let counts = rho_coref_counts(&d);
        assert_eq!(counts.antecedents, 0);
        assert_eq!(rho_coref(&d), 0.0);
    }

    #[test]
    fn muc_worked_example() {
        let (pred, gold) = worked_example();
        let (prf1, _) = muc(&pred, &gold).unwrap();
        assert_eq!(prf1.precision, 0.5);
        assert_eq!(prf1.recall, 0.5);
        assert_eq!(prf1.f1, 0.5);
    }

    #[test]
    fn muc_perfect_and_degenerate() {
        let gold = clustering(&[&["a", "b"], &["c"]]);
        let (prf1, _) = muc(&gold, &gold).unwrap();
        assert_eq!(prf1.f1, 1.0);

        // All-singleton prediction against a linked gold: recall 0.
        let pred = clustering(&[&["a"], &["b"]]);
        let gold2 = clustering(&[&["a", "b"]]);
        let (prf1, flags) = muc(&pred, &gold2).unwrap();
        assert_eq!(prf1.recall, 0.0);
        assert_eq!(prf1.f1, 0.0);
        assert!(flags.iter().any(|f| f.starts_with("muc")));
    }

    #[test]
    fn b_cubed_worked_example() {
        let (pred, gold) = worked_example();
        let (prf1, _) = b_cubed(&pred, &gold).unwrap();
        assert!((prf1.precision - 0.75).abs() < 1e-12);
        assert!((prf1.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((prf1.f1 - 12.0 / 17.0).abs() < 1e-12);
    }

    #[test]
    fn b_cubed_formula_collapse() {
        // One big predicted cluster against n singleton golds.
        let pred = clustering(&[&["a", "b", "c", "d"]]);
        let gold = clustering(&[&["a"], &["b"], &["c"], &["d"]]);
        let (prf1, _) = b_cubed(&pred, &gold).unwrap();
        assert!((prf1.precision - 0.25).abs() < 1e-12);
        assert_eq!(prf1.recall, 1.0);
    }

    #[test]
    fn ceaf_e_worked_example() {
        let (pred, gold) = worked_example();
        let counts = ceaf_e_counts(&pred, &gold).unwrap();
        assert!((counts.phi_sum - 22.0 / 15.0).abs() < 1e-12);
        let (prf1, _) = ceaf_e(&pred, &gold).unwrap();
        assert!((prf1.precision - 11.0 / 15.0).abs() < 1e-12);
        assert!((prf1.recall - 11.0 / 15.0).abs() < 1e-12);
        assert!((prf1.f1 - 11.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn ceaf_e_perfect_self_similarity() {
        let gold = clustering(&[&["a", "b"], &["c"]]);
        let (prf1, _) = ceaf_e(&gold, &gold).unwrap();
        assert_eq!(prf1.f1, 1.0);
    }

    #[test]
    fn ceaf_e_empty_flagged() {
        let empty = clustering(&[]);
        let (prf1, flags) = ceaf_e(&empty, &empty).unwrap();
        assert_eq!(prf1.f1, 0.0);
        assert!(!flags.is_empty());
    }

    #[test]
    fn conll_worked_example() {
        let value = conll_avg(0.5, 12.0 / 17.0, 11.0 / 15.0);
        assert!((value - 64.64).abs() < 0.01, "got {value}");
        assert_eq!(conll_avg(1.0, 1.0, 1.0), 100.0);
        assert_eq!(conll_avg(0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn evaluate_coref_micro_average_and_report() {
        let (pred, gold) = worked_example();
        let d = decisions(&[("a", "b", true), ("c", "d", true), ("a", "c", false)]);
        let report = evaluate_coref(&[CorefDocEval {
            decisions: &d,
            pred_clustering: Some(&pred),
            gold: &gold,
        }])
        .unwrap();
        let conll = report.conll.unwrap();
        assert!((conll - 64.64).abs() < 0.01);
        assert_eq!(report.rho, 0.0);
        // Decisions-only report skips cluster metrics.
        let report = evaluate_coref(&[CorefDocEval {
            decisions: &d,
            pred_clustering: None,
            gold: &gold,
        }])
        .unwrap();
        assert!(report.muc.is_none() && report.conll.is_none());
    }

    #[test]
    fn metrics_symmetric_under_reordering() {
        let gold1 = clustering(&[&["a", "b", "c"], &["d"]]);
        let pred1 = clustering(&[&["a", "b"], &["c", "d"]]);
        let gold2 = clustering(&[&["x", "y"]]);
        let pred2 = clustering(&[&["x"], &["y"]]);
        let d1 = decisions(&[("a", "b", true), ("c", "d", true)]);
        let d2 = decisions(&[("x", "y", false)]);
        let forward = evaluate_coref(&[
            CorefDocEval {
                decisions: &d1,
                pred_clustering: Some(&pred1),
                gold: &gold1,
            },
            CorefDocEval {
                decisions: &d2,
                pred_clustering: Some(&pred2),
                gold: &gold2,
            },
        ])
        .unwrap();
        let backward = evaluate_coref(&[
            CorefDocEval {
                decisions: &d2,
                pred_clustering: Some(&pred2),
                gold: &gold2,
            },
            CorefDocEval {
                decisions: &d1,
                pred_clustering: Some(&pred1),
                gold: &gold1,
            },
        ])
        .unwrap();
        assert_eq!(forward.pairwise, backward.pairwise);
        assert_eq!(forward.muc, backward.muc);
        assert_eq!(forward.conll, backward.conll);
    }
}
