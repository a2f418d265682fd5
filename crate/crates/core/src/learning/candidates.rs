use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use itertools::Itertools;

use super::{ActionLog, EmsConfig};
use crate::{Error, Hyperedge, NodeId, PurchaseNode, SocialGraph};

/// A candidate hyperedge without a probability. Ids index
/// [`CandidateSet::nodes`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    /// Sorted, duplicate free.
    pub sources: Vec<NodeId>,
    pub dest: NodeId,
}

/// Candidate hyperedges mined from a log, with trial counts per source set
/// and the candidates that could explain each action.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    nodes: Vec<PurchaseNode>,
    edges: Vec<Candidate>,
    source_sets: Vec<Vec<NodeId>>,
    edge_source: Vec<usize>,
    trials: Vec<u64>,
    per_action: Vec<Vec<usize>>,
}

impl CandidateSet {
    /// Assembles a set from explicit parts. `trials` gives `N_U` per source
    /// set; `per_action[a]` lists the indices into `edges` that could explain
    /// action `a`. Edges whose source set has zero trials are dropped.
    pub fn from_raw(
        nodes: Vec<PurchaseNode>,
        edges: Vec<Candidate>,
        trials: &BTreeMap<Vec<NodeId>, u64>,
        per_action: Vec<Vec<usize>>,
    ) -> Result<Self, Error> {
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("candidate nodes must be sorted and distinct"));
        }
        let mut usage = alloc::vec![0u64; edges.len()];
        for ea in &per_action {
            for &e in ea {
                *usage.get_mut(e).ok_or(Error::InvalidConfig("action refers to an unknown candidate"))? += 1;
            }
        }
        let mut keep = alloc::vec![usize::MAX; edges.len()];
        let mut set = Self {
            nodes,
            edges: Vec::new(),
            source_sets: Vec::new(),
            edge_source: Vec::new(),
            trials: Vec::new(),
            per_action: Vec::new(),
        };
        let mut set_ids: BTreeMap<Vec<NodeId>, usize> = BTreeMap::new();
        for (i, edge) in edges.into_iter().enumerate() {
            let n = set.nodes.len();
            if edge.sources.is_empty() {
                return Err(Error::EmptySources);
            }
            if edge.sources.windows(2).any(|w| w[0] >= w[1])
                || edge.sources.iter().chain([&edge.dest]).any(|v| v.index() >= n)
            {
                return Err(Error::InvalidConfig("candidate sources must be sorted, distinct and known"));
            }
            if edge.sources.contains(&edge.dest) {
                return Err(Error::DestinationInSources(set.nodes[edge.dest.index()].to_string()));
            }
            let n_u = trials.get(&edge.sources).copied().unwrap_or(0);
            if n_u == 0 {
                if usage[i] > 0 {
                    return Err(Error::InvalidConfig("used candidate has no trials"));
                }
                continue;
            }
            if n_u < usage[i] {
                return Err(Error::InvalidConfig("trial count below the number of explained actions"));
            }
            let sid = *set_ids.entry(edge.sources.clone()).or_insert_with(|| {
                set.source_sets.push(edge.sources.clone());
                set.trials.push(n_u);
                set.source_sets.len() - 1
            });
            keep[i] = set.edges.len();
            set.edges.push(edge);
            set.edge_source.push(sid);
        }
        set.per_action = per_action
            .into_iter()
            .map(|ea| ea.into_iter().map(|e| keep[e]).collect())
            .collect();
        Ok(set)
    }

    pub fn nodes(&self) -> &[PurchaseNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &PurchaseNode {
        &self.nodes[id.index()]
    }

    pub fn edges(&self) -> &[Candidate] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source_sets(&self) -> &[Vec<NodeId>] {
        &self.source_sets
    }

    /// Index into [`Self::source_sets`] of edge `e`'s sources.
    pub fn source_of(&self, e: usize) -> usize {
        self.edge_source[e]
    }

    /// `N_U` of source set `u`.
    pub fn trials(&self, u: usize) -> u64 {
        self.trials[u]
    }

    /// `N_U` of edge `e`'s source set.
    pub fn edge_trials(&self, e: usize) -> u64 {
        self.trials[self.edge_source[e]]
    }

    /// `E_a` for every action, in log order.
    pub fn per_action(&self) -> &[Vec<usize>] {
        &self.per_action
    }

    /// Position of `(sources, dest)` among the candidates.
    pub fn find(&self, sources: &[NodeId], dest: NodeId) -> Option<usize> {
        self.edges.iter().position(|c| c.sources == sources && c.dest == dest)
    }

    /// Looks a candidate up by purchase nodes; source order is irrelevant.
    pub fn find_nodes(&self, sources: &[PurchaseNode], dest: &PurchaseNode) -> Option<usize> {
        let id = |n: &PurchaseNode| self.nodes.binary_search(n).ok().map(|i| NodeId(i as u32));
        let mut ids: Vec<NodeId> = sources.iter().map(id).collect::<Option<_>>()?;
        ids.sort_unstable();
        self.find(&ids, id(dest)?)
    }

    pub fn hyperedge(&self, e: usize, prob: f64) -> Hyperedge {
        let c = &self.edges[e];
        Hyperedge::new(
            c.sources.iter().map(|s| self.node(*s).clone()).collect(),
            self.node(c.dest).clone(),
            prob,
        )
    }
}

/// Per-user purchases, time ordered.
struct Timeline {
    by_user: BTreeMap<alloc::string::String, Vec<(i64, NodeId)>>,
}

impl Timeline {
    fn window(&self, user: &str, from: i64, to: i64) -> &[(i64, NodeId)] {
        let Some(list) = self.by_user.get(user) else { return &[] };
        let lo = list.partition_point(|x| x.0 < from);
        let hi = list.partition_point(|x| x.0 < to);
        &list[lo..hi]
    }
}

/// Mines candidate hyperedges.
///
/// For a purchase `(u, i)` at `t`, the trigger pool holds `u`'s own purchases
/// in `[t - item_window, t)` and the purchases of `u`'s in-neighbours in
/// `[t - social_window, t)`, the destination itself excluded. Pools over
/// `pool_cap` keep their most recent members. Every nonempty subset of at most
/// `mu` pool members becomes a candidate into `(u, i)`.
///
/// `N_U` counts the distinct times `t` at which a member of `U` is purchased
/// while every other member has a purchase in `[t - w, t]`, `w` being the
/// wider window. It is raised where needed to the number of actions the
/// candidate appears for.
pub fn generate_candidates(log: &ActionLog, social: &SocialGraph, cfg: &EmsConfig) -> Result<CandidateSet, Error> {
    cfg.validate()?;
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    let nodes = log.nodes();
    let id_of = |n: &PurchaseNode| NodeId(nodes.binary_search(n).expect("node from log") as u32);

    let mut timeline = Timeline {
        by_user: BTreeMap::new(),
    };
    let mut times: Vec<Vec<i64>> = alloc::vec![Vec::new(); nodes.len()];
    let mut action_ids = Vec::with_capacity(log.len());
    for a in log.records() {
        let id = id_of(&a.node);
        action_ids.push(id);
        timeline.by_user.entry(a.node.user.clone()).or_default().push((a.time, id));
        times[id.index()].push(a.time);
    }
    for t in &mut times {
        t.dedup();
    }

    let mut edge_ids: BTreeMap<Candidate, usize> = BTreeMap::new();
    let mut edges: Vec<Candidate> = Vec::new();
    let mut per_action: Vec<Vec<usize>> = Vec::with_capacity(log.len());
    for (a, &dest) in log.records().iter().zip(&action_ids) {
        let mut pool: BTreeMap<NodeId, i64> = BTreeMap::new();
        let mut offer = |hits: &[(i64, NodeId)]| {
            for &(t, v) in hits {
                if v != dest {
                    let slot = pool.entry(v).or_insert(t);
                    *slot = (*slot).max(t);
                }
            }
        };
        offer(timeline.window(&a.node.user, a.time.saturating_sub(cfg.item_window), a.time));
        for friend in social.in_neighbors(&a.node.user) {
            if *friend != a.node.user {
                offer(timeline.window(friend, a.time.saturating_sub(cfg.social_window), a.time));
            }
        }
        let mut members: Vec<(NodeId, i64)> = pool.into_iter().collect();
        if members.len() > cfg.pool_cap {
            members.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
            members.truncate(cfg.pool_cap);
            members.sort_unstable();
        }
        let members: Vec<NodeId> = members.into_iter().map(|m| m.0).collect();
        let mut ea = Vec::new();
        for size in 1..=cfg.mu.min(members.len()) {
            for sources in members.iter().copied().combinations(size) {
                let key = Candidate { sources, dest };
                let next = edges.len();
                let id = *edge_ids.entry(key.clone()).or_insert(next);
                if id == next {
                    edges.push(key);
                }
                ea.push(id);
            }
        }
        per_action.push(ea);
    }

    let mut counts = alloc::vec![0u64; edges.len()];
    for ea in &per_action {
        for &e in ea {
            counts[e] += 1;
        }
    }
    let mut usage: BTreeMap<Vec<NodeId>, u64> = BTreeMap::new();
    for (e, c) in edges.iter().zip(&counts) {
        let slot = usage.entry(e.sources.clone()).or_insert(0);
        *slot = (*slot).max(*c);
    }
    let wide = cfg.item_window.max(cfg.social_window);
    let trials: BTreeMap<Vec<NodeId>, u64> = usage
        .into_iter()
        .map(|(u, used)| {
            let n = co_occurrences(&u, &times, wide).max(used);
            (u, n)
        })
        .collect();
    CandidateSet::from_raw(nodes, edges, &trials, per_action)
}

/// Distinct times at which some member of `set` is purchased and every other
/// member has a purchase no more than `window` earlier.
pub fn co_occurrences(set: &[NodeId], times: &[Vec<i64>], window: i64) -> u64 {
    let mut hits: Vec<i64> = Vec::new();
    for (k, m) in set.iter().enumerate() {
        'times: for &t in &times[m.index()] {
            for (j, other) in set.iter().enumerate() {
                if j == k {
                    continue;
                }
                let ts = &times[other.index()];
                let lo = ts.partition_point(|&x| x < t.saturating_sub(window));
                if lo >= ts.len() || ts[lo] > t {
                    continue 'times;
                }
            }
            hits.push(t);
        }
    }
    hits.sort_unstable();
    hits.dedup();
    hits.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::Action;
    use alloc::vec;

    fn act(u: &str, i: &str, t: i64) -> Action {
        Action::new(PurchaseNode::new(u, i), t)
    }

    fn cfg(mu: usize, window: i64) -> EmsConfig {
        EmsConfig {
            mu,
            item_window: window,
            social_window: window,
            ..EmsConfig::default()
        }
    }

    #[test]
    fn same_user_item_inference() {
        let log = ActionLog::new([act("A", "i1", 1), act("A", "i2", 2)]);
        let c = generate_candidates(&log, &SocialGraph::new(), &cfg(2, 1)).unwrap();
        let (a1, a2) = (PurchaseNode::new("A", "i1"), PurchaseNode::new("A", "i2"));
        let e = c.find_nodes(&[a1], &a2).unwrap();
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.per_action(), &[vec![], vec![e]]);
        assert_eq!(c.edge_trials(e), 1);
    }

    #[test]
    fn friend_purchase_is_social_candidate() {
        let mut social = SocialGraph::new();
        social.add_edge("A", "B");
        let log = ActionLog::new([act("A", "i", 1), act("B", "i", 5)]);
        let c = generate_candidates(&log, &social, &cfg(2, 4)).unwrap();
        let e = c
            .find_nodes(&[PurchaseNode::new("A", "i")], &PurchaseNode::new("B", "i"))
            .unwrap();
        assert_eq!(c.per_action()[1], vec![e]);
        // Outside the window nothing qualifies.
        let c = generate_candidates(&log, &social, &cfg(2, 3)).unwrap();
        assert_eq!(c.edge_count(), 0);
        assert!(c.per_action().iter().all(Vec::is_empty));
        // Influence does not flow against the social edge.
        let log = ActionLog::new([act("B", "i", 1), act("A", "i", 2)]);
        assert_eq!(generate_candidates(&log, &social, &cfg(2, 4)).unwrap().edge_count(), 0);
    }

    #[test]
    fn simultaneous_purchases_do_not_trigger() {
        let mut social = SocialGraph::new();
        social.add_edge("A", "B");
        let log = ActionLog::new([act("A", "i", 3), act("B", "i", 3)]);
        assert_eq!(generate_candidates(&log, &social, &cfg(2, 5)).unwrap().edge_count(), 0);
    }

    #[test]
    fn subsets_up_to_mu_and_trials() {
        let mut social = SocialGraph::new();
        social.add_edge("A", "C");
        social.add_edge("B", "C");
        let log = ActionLog::new([
            act("A", "i", 0),
            act("B", "i", 0),
            act("C", "i", 1),
            act("A", "i", 10),
            act("A", "i", 20),
            act("B", "i", 20),
        ]);
        let c = generate_candidates(&log, &social, &cfg(2, 1)).unwrap();
        assert_eq!(c.edge_count(), 3);
        let [a, b, cc] = ["A", "B", "C"].map(|u| PurchaseNode::new(u, "i"));
        let pair = c.find_nodes(&[b.clone(), a.clone()], &cc).unwrap();
        let single = c.find_nodes(core::slice::from_ref(&a), &cc).unwrap();
        assert_eq!(c.edge_trials(single), 3);
        assert_eq!(c.edge_trials(pair), 2);
        let c1 = generate_candidates(&log, &social, &cfg(1, 1)).unwrap();
        assert_eq!(c1.edge_count(), 2);
    }

    #[test]
    fn pool_cap_keeps_most_recent() {
        let log = ActionLog::new((0..5).map(|t| act("A", &alloc::format!("i{t}"), t)));
        let c = generate_candidates(
            &log,
            &SocialGraph::new(),
            &EmsConfig {
                mu: 1,
                item_window: 10,
                social_window: 10,
                pool_cap: 2,
                ..EmsConfig::default()
            },
        )
        .unwrap();
        let last = c.per_action().last().unwrap();
        let sources: Vec<_> = last.iter().map(|&e| c.node(c.edges()[e].sources[0]).item.clone()).collect();
        assert_eq!(sources, ["i2", "i3"]);
    }

    #[test]
    fn guards() {
        let log = ActionLog::new([act("A", "i", 0)]);
        let social = SocialGraph::new();
        assert_eq!(
            generate_candidates(&log, &social, &cfg(5, 1)).unwrap_err(),
            Error::HyperedgeSizeLimit { mu: 5, limit: 4 }
        );
        assert_eq!(
            generate_candidates(&ActionLog::default(), &social, &cfg(2, 1)).unwrap_err(),
            Error::EmptyLog
        );
    }

    #[test]
    fn from_raw_drops_untried_edges() {
        let nodes = ["a", "b", "c"].map(|u| PurchaseNode::new(u, "i")).to_vec();
        let e = |s: u32, d: u32| Candidate {
            sources: vec![NodeId(s)],
            dest: NodeId(d),
        };
        let trials = BTreeMap::from([(vec![NodeId(1)], 3)]);
        let c = CandidateSet::from_raw(nodes.clone(), vec![e(0, 2), e(1, 2)], &trials, vec![vec![1]]).unwrap();
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.per_action(), &[vec![0]]);
        let short = BTreeMap::from([(vec![NodeId(1)], 1)]);
        assert!(CandidateSet::from_raw(nodes, vec![e(1, 2)], &short, vec![vec![0], vec![0]]).is_err());
    }
}
