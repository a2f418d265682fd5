//! Exact expected adoption under the live-hyperedge coupling.
//!
//! Each hyperedge flips one coin up front; the adopted set is the least fixed
//! point where a node is active iff it is a seed or the destination of a live
//! hyperedge whose sources are all active. The expected size of that closure
//! equals the expected adoption of the iterative cascade.
//!
//! Rather than walking all `2^m` coin outcomes, the search only branches on a
//! hyperedge once it becomes eligible (all sources active, destination not
//! yet active). Coins that never get consulted marginalize out, so the leaf
//! probabilities still sum to one and the result is identical to the full
//! enumeration. Edges with probability 0 or 1 never branch.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, NodeId, SocialItemGraph};

/// Default bound on the number of hyperedges with `0 < p < 1`.
pub const DEFAULT_ENUMERATION_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOutcome {
    /// Expected number of active nodes.
    pub expected: f64,
    /// Total probability of the visited worlds (one up to rounding).
    pub mass: f64,
    /// Number of distinguishable worlds visited.
    pub worlds: u64,
}

/// Expected adoption of `seeds`, using [`DEFAULT_ENUMERATION_CAP`].
pub fn exact_adoption(graph: &SocialItemGraph, seeds: &[NodeId]) -> Result<f64, Error> {
    exact_adoption_capped(graph, seeds, DEFAULT_ENUMERATION_CAP).map(|o| o.expected)
}

/// Expected adoption with an explicit cap on uncertain hyperedges.
pub fn exact_adoption_capped(
    graph: &SocialItemGraph,
    seeds: &[NodeId],
    cap: usize,
) -> Result<ExactOutcome, Error> {
    graph.check_seeds(seeds)?;
    let uncertain = graph
        .edges()
        .iter()
        .filter(|e| e.prob > 0.0 && e.prob < 1.0)
        .count();
    if uncertain > cap {
        return Err(Error::EnumerationCap { uncertain, cap });
    }
    let mut search = Search {
        graph,
        active: vec![false; graph.node_count()],
        decided: vec![false; graph.edge_count()],
        active_count: 0,
        trail: Vec::new(),
        outcome: ExactOutcome {
            expected: 0.0,
            mass: 0.0,
            worlds: 0,
        },
    };
    for s in seeds {
        if !search.active[s.index()] {
            search.active[s.index()] = true;
            search.active_count += 1;
        }
    }
    search.explore(1.0);
    Ok(search.outcome)
}

enum Change {
    Decided(usize),
    Activated(NodeId),
}

struct Search<'g> {
    graph: &'g SocialItemGraph,
    active: Vec<bool>,
    decided: Vec<bool>,
    active_count: usize,
    trail: Vec<Change>,
    outcome: ExactOutcome,
}

impl Search<'_> {
    fn next_eligible(&self) -> Option<usize> {
        self.graph.edges().iter().enumerate().find_map(|(id, e)| {
            let eligible = !self.decided[id]
                && !self.active[e.dest.index()]
                && e.sources.iter().all(|s| self.active[s.index()]);
            eligible.then_some(id)
        })
    }

    fn fire(&mut self, id: usize) {
        self.decided[id] = true;
        self.trail.push(Change::Decided(id));
        let dest = self.graph.edge(id).dest;
        self.active[dest.index()] = true;
        self.active_count += 1;
        self.trail.push(Change::Activated(dest));
    }

    fn kill(&mut self, id: usize) {
        self.decided[id] = true;
        self.trail.push(Change::Decided(id));
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop() {
                Some(Change::Decided(id)) => self.decided[id] = false,
                Some(Change::Activated(v)) => {
                    self.active[v.index()] = false;
                    self.active_count -= 1;
                }
                None => unreachable!(),
            }
        }
    }

    fn explore(&mut self, weight: f64) {
        let start = self.trail.len();
        loop {
            let Some(id) = self.next_eligible() else {
                self.outcome.expected += weight * self.active_count as f64;
                self.outcome.mass += weight;
                self.outcome.worlds += 1;
                break;
            };
            let p = self.graph.edge(id).prob;
            if p >= 1.0 {
                self.fire(id);
                continue;
            }
            if p <= 0.0 {
                self.kill(id);
                continue;
            }
            let mark = self.trail.len();
            self.fire(id);
            self.explore(weight * p);
            self.undo(mark);
            self.kill(id);
            self.explore(weight * (1.0 - p));
            break;
        }
        self.undo(start);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{build_graph, Hyperedge, PurchaseNode};

    fn n(u: &str) -> PurchaseNode {
        PurchaseNode::new(u, "i")
    }

    /// Independent oracle: every one of the 2^m live subsets, closure by
    /// repeated sweeps.
    fn brute_force(graph: &SocialItemGraph, seeds: &[NodeId]) -> (f64, f64) {
        let m = graph.edge_count();
        let (mut expected, mut mass) = (0.0, 0.0);
        for mask in 0u64..(1 << m) {
            let mut pr = 1.0;
            for (i, e) in graph.edges().iter().enumerate() {
                pr *= if mask >> i & 1 == 1 { e.prob } else { 1.0 - e.prob };
            }
            let mut active = vec![false; graph.node_count()];
            for s in seeds {
                active[s.index()] = true;
            }
            loop {
                let mut changed = false;
                for (i, e) in graph.edges().iter().enumerate() {
                    if mask >> i & 1 == 1
                        && !active[e.dest.index()]
                        && e.sources.iter().all(|s| active[s.index()])
                    {
                        active[e.dest.index()] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            expected += pr * active.iter().filter(|a| **a).count() as f64;
            mass += pr;
        }
        (expected, mass)
    }

    #[test]
    fn seeds_only() {
        let g = build_graph([n("a"), n("b")], []).unwrap();
        assert_eq!(exact_adoption(&g, &[NodeId(0), NodeId(1)]).unwrap(), 2.0);
    }

    #[test]
    fn single_edge_half() {
        let g = build_graph([n("u"), n("v")], [Hyperedge::new(vec![n("u")], n("v"), 0.5)]).unwrap();
        assert_eq!(exact_adoption(&g, &[NodeId(0)]).unwrap(), 1.5);
    }

    #[test]
    fn all_sources_required() {
        let g = build_graph(
            [n("a"), n("b"), n("c")],
            [Hyperedge::new(vec![n("a"), n("b")], n("c"), 1.0)],
        )
        .unwrap();
        assert_eq!(exact_adoption(&g, &[NodeId(0)]).unwrap(), 1.0);
        assert_eq!(exact_adoption(&g, &[NodeId(0), NodeId(1)]).unwrap(), 3.0);
    }

    #[test]
    fn cap_is_enforced() {
        let nodes: Vec<_> = (0..6).map(|i| n(&alloc::format!("n{i}"))).collect();
        let edges: Vec<_> = (1..6)
            .map(|i| Hyperedge::new(vec![nodes[0].clone()], nodes[i].clone(), 0.5))
            .collect();
        let g = build_graph(nodes, edges).unwrap();
        let err = exact_adoption_capped(&g, &[NodeId(0)], 4).unwrap_err();
        assert_eq!(err, Error::EnumerationCap { uncertain: 5, cap: 4 });
        assert!(exact_adoption_capped(&g, &[NodeId(0)], 5).is_ok());
    }

    #[test]
    fn matches_full_enumeration_on_mixed_graph() {
        let ns: Vec<_> = ["a", "b", "c", "d", "e"].iter().map(|u| n(u)).collect();
        let g = build_graph(
            ns.clone(),
            [
                Hyperedge::new(vec![ns[0].clone()], ns[1].clone(), 0.3),
                Hyperedge::new(vec![ns[0].clone(), ns[1].clone()], ns[2].clone(), 0.8),
                Hyperedge::new(vec![ns[2].clone()], ns[3].clone(), 0.45),
                Hyperedge::new(vec![ns[1].clone()], ns[3].clone(), 0.6),
                Hyperedge::new(vec![ns[3].clone(), ns[0].clone()], ns[4].clone(), 0.9),
                Hyperedge::new(vec![ns[4].clone()], ns[1].clone(), 0.25),
            ],
        )
        .unwrap();
        for seeds in [vec![NodeId(0)], vec![NodeId(2)], vec![NodeId(0), NodeId(4)]] {
            let got = exact_adoption_capped(&g, &seeds, 22).unwrap();
            let (want, mass) = brute_force(&g, &seeds);
            assert!((got.expected - want).abs() < 1e-12, "{seeds:?}: {got:?} vs {want}");
            assert!((got.mass - 1.0).abs() < 1e-12);
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }
}
