use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::PurchaseNode;

/// One observed purchase.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub node: PurchaseNode,
    /// Seconds, possibly negative.
    pub time: i64,
}

impl Action {
    pub fn new(node: PurchaseNode, time: i64) -> Self {
        Self { node, time }
    }
}

/// Purchases in nondecreasing time order. Equal timestamps keep their input
/// order; repeated `(node, time)` records are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionLog {
    records: Vec<Action>,
}

impl ActionLog {
    pub fn new(records: impl IntoIterator<Item = Action>) -> Self {
        let mut seen = BTreeSet::new();
        let mut records: Vec<Action> = records
            .into_iter()
            .filter(|a| seen.insert((a.node.clone(), a.time)))
            .collect();
        records.sort_by_key(|a| a.time);
        Self { records }
    }

    pub fn records(&self) -> &[Action] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Distinct purchase nodes, sorted.
    pub fn nodes(&self) -> Vec<PurchaseNode> {
        let set: BTreeSet<&PurchaseNode> = self.records.iter().map(|a| &a.node).collect();
        set.into_iter().cloned().collect()
    }

    /// Records with `from <= time < to`.
    pub fn between(&self, from: i64, to: i64) -> Self {
        let lo = self.records.partition_point(|a| a.time < from);
        let hi = self.records.partition_point(|a| a.time < to);
        Self {
            records: self.records[lo..hi].to_vec(),
        }
    }

    /// Splits into `k` contiguous chunks of near-equal record count. Records
    /// sharing a timestamp never straddle a boundary, so chunks may be uneven
    /// or empty.
    pub fn folds(&self, k: usize) -> Vec<Self> {
        let k = k.max(1);
        let n = self.records.len();
        let mut out = Vec::with_capacity(k);
        let mut start = 0;
        for f in 1..=k {
            let mut end = (n * f / k).max(start);
            while end > start && end < n && self.records[end].time == self.records[end - 1].time {
                end += 1;
            }
            out.push(Self {
                records: self.records[start..end].to_vec(),
            });
            start = end;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(u: &str, t: i64) -> Action {
        Action::new(PurchaseNode::new(u, "i"), t)
    }

    #[test]
    fn sorts_stably_and_dedups() {
        let log = ActionLog::new([a("x", 5), a("y", -3), a("z", 5), a("x", 5)]);
        let order: Vec<_> = log.records().iter().map(|r| (r.node.user.as_str(), r.time)).collect();
        assert_eq!(order, [("y", -3), ("x", 5), ("z", 5)]);
    }

    #[test]
    fn folds_cover_the_log() {
        let log = ActionLog::new((0..10).map(|t| a("u", t)));
        let folds = log.folds(3);
        assert_eq!(folds.iter().map(ActionLog::len).collect::<Vec<_>>(), [3, 3, 4]);
        let log = ActionLog::new([a("p", 1), a("q", 1), a("r", 1), a("s", 2)]);
        let folds = log.folds(2);
        assert_eq!(folds.iter().map(ActionLog::len).collect::<Vec<_>>(), [3, 1]);
        assert_eq!(log.between(1, 2).len(), 3);
    }
}
