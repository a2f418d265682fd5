//! Precision, recall and F1 of one-step purchase prediction.

use std::collections::BTreeSet;

use serde::Serialize;
use sigmax_core::learning::ActionLog;
use sigmax_core::{activation_probability, DiffusionState, NodeId, PurchaseNode, RunStream, SocialItemGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrfScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when some ratio had a zero denominator and was reported as 0.
    pub degenerate: bool,
}

fn ratio(num: f64, den: f64, flag: &mut bool) -> f64 {
    if den == 0.0 {
        *flag = true;
        0.0
    } else {
        num / den
    }
}

impl PrfScores {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let mut degenerate = false;
        let precision = ratio(tp as f64, (tp + fp) as f64, &mut degenerate);
        let recall = ratio(tp as f64, (tp + fn_) as f64, &mut degenerate);
        let f1 = ratio(2.0 * precision * recall, precision + recall, &mut degenerate);
        Self {
            precision,
            recall,
            f1,
            degenerate,
        }
    }

    pub fn from_sets<T: Ord>(predicted: &BTreeSet<T>, truth: &BTreeSet<T>) -> Self {
        let tp = predicted.intersection(truth).count();
        Self::from_counts(tp, predicted.len() - tp, truth.len() - tp)
    }

    /// Component-wise mean; flagged if any input was.
    pub fn mean(scores: &[PrfScores]) -> Self {
        let n = scores.len().max(1) as f64;
        let sum = |f: fn(&PrfScores) -> f64| scores.iter().map(f).sum::<f64>() / n;
        Self {
            precision: sum(|s| s.precision),
            recall: sum(|s| s.recall),
            f1: sum(|s| s.f1),
            degenerate: scores.is_empty() || scores.iter().any(|s| s.degenerate),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredictionRule {
    /// Predict when the activation probability exceeds the threshold.
    Threshold(f64),
    /// Predict by a Bernoulli draw per action, scores averaged over runs.
    Sampled { runs: u32, rng_seed: u64 },
}

impl Default for PredictionRule {
    fn default() -> Self {
        Self::Threshold(0.5)
    }
}

/// Activation probability of every model node not already observed, given
/// that everything in `observed` has just become active.
pub fn one_step_probabilities(model: &SocialItemGraph, observed: &ActionLog) -> Vec<(NodeId, f64)> {
    let active: Vec<NodeId> = observed
        .nodes()
        .iter()
        .filter_map(|n| model.node_id(n))
        .collect();
    let state = DiffusionState::new(model.node_count(), &active);
    model
        .node_ids()
        .filter(|v| !state.is_active(*v))
        .map(|v| (v, activation_probability(model, v, &state)))
        .collect()
}

/// Scores one-step predictions from `train_tail` against the new purchases
/// in `test`. Only test purchases before `test start + horizon` count as
/// truth, and purchases already present in `train_tail` never do.
pub fn evaluate_prediction(
    model: &SocialItemGraph,
    train_tail: &ActionLog,
    test: &ActionLog,
    horizon: Option<i64>,
    rule: PredictionRule,
) -> PrfScores {
    let seen: BTreeSet<PurchaseNode> = train_tail.nodes().into_iter().collect();
    let test = match (horizon, test.records().first()) {
        (Some(h), Some(first)) => test.between(first.time, first.time.saturating_add(h)),
        _ => test.clone(),
    };
    let truth: BTreeSet<PurchaseNode> = test.nodes().into_iter().filter(|n| !seen.contains(n)).collect();
    let probs = one_step_probabilities(model, train_tail);
    let predicted = |keep: &mut dyn FnMut(NodeId, f64) -> bool| -> BTreeSet<PurchaseNode> {
        probs
            .iter()
            .filter(|(v, p)| keep(*v, *p))
            .map(|(v, _)| model.node(*v).clone())
            .collect()
    };
    match rule {
        PredictionRule::Threshold(t) => PrfScores::from_sets(&predicted(&mut |_, p| p > t), &truth),
        PredictionRule::Sampled { runs, rng_seed } => {
            let scores: Vec<PrfScores> = (0..runs as u64)
                .map(|r| {
                    let mut stream = RunStream::new(rng_seed, r, model.node_count());
                    PrfScores::from_sets(&predicted(&mut |v, p| stream.uniform(1, v) < p), &truth)
                })
                .collect();
            PrfScores::mean(&scores)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sigmax_core::learning::Action;
    use sigmax_core::{build_graph, Hyperedge};

    #[test]
    fn toy_counts() {
        let set = |xs: &[&'static str]| xs.iter().copied().collect::<BTreeSet<_>>();
        let s = PrfScores::from_sets(&set(&["a", "b", "c", "d"]), &set(&["a", "b", "x", "y", "z"]));
        assert_eq!((s.precision, s.recall), (0.5, 0.4));
        assert!((s.f1 - 4.0 / 9.0).abs() < 1e-15);
        assert!(!s.degenerate);
        let perfect = PrfScores::from_sets(&set(&["a"]), &set(&["a"]));
        assert_eq!((perfect.precision, perfect.recall, perfect.f1), (1.0, 1.0, 1.0));
        let empty = PrfScores::from_sets(&set(&[]), &set(&["a"]));
        assert_eq!((empty.precision, empty.recall, empty.f1), (0.0, 0.0, 0.0));
        assert!(empty.degenerate);
    }

    fn n(u: &str) -> PurchaseNode {
        PurchaseNode::new(u, "i")
    }

    #[test]
    fn threshold_and_horizon() {
        let edges = [("s", "a", 0.9), ("s", "b", 0.6), ("s", "c", 0.4), ("t", "d", 0.9)];
        let model = build_graph(
            ["s", "t", "a", "b", "c", "d"].map(n),
            edges.iter().map(|(s, d, p)| Hyperedge::new(vec![n(s)], n(d), *p)),
        )
        .unwrap();
        let tail = ActionLog::new([Action::new(n("s"), 0)]);
        let test = ActionLog::new([Action::new(n("a"), 10), Action::new(n("s"), 11), Action::new(n("c"), 50)]);
        let s = evaluate_prediction(&model, &tail, &test, None, PredictionRule::default());
        assert_eq!((s.precision, s.recall), (0.5, 0.5));
        let s = evaluate_prediction(&model, &tail, &test, Some(20), PredictionRule::default());
        assert_eq!((s.precision, s.recall), (0.5, 1.0));
        let sampled = PredictionRule::Sampled { runs: 4000, rng_seed: 3 };
        let s = evaluate_prediction(&model, &tail, &test, Some(20), sampled);
        // a is predicted with probability 0.9; expected predicted-set size 1.9.
        assert!((s.recall - 0.9).abs() < 0.03, "{s:?}");
        assert_eq!(s, evaluate_prediction(&model, &tail, &test, Some(20), sampled));
    }
}
