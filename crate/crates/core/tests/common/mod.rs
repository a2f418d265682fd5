#![allow(dead_code)]

use proptest::collection::vec;
use proptest::prelude::*;
use sigmax_core::{build_graph, DiffusionState, Hyperedge, NodeId, PurchaseNode, SocialItemGraph};

pub fn node(i: usize) -> PurchaseNode {
    PurchaseNode::new(format!("n{i:02}"), "item")
}

fn prob() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 1 => Just(1.0), 6 => 0.01f64..0.99]
}

/// Random graphs on `2..=max_nodes` nodes with up to `max_edges` hyperedges
/// of one to `max_sources` sources each.
pub fn graphs(max_nodes: usize, max_edges: usize, max_sources: usize) -> impl Strategy<Value = SocialItemGraph> {
    (2..=max_nodes)
        .prop_flat_map(move |n| {
            let edge = (0..n, vec(0..n, 1..=max_sources), prob());
            (Just(n), vec(edge, 0..=max_edges))
        })
        .prop_map(|(n, raw)| {
            let edges = raw.into_iter().filter_map(|(d, srcs, p)| {
                let mut srcs: Vec<usize> = srcs.into_iter().filter(|s| *s != d).collect();
                srcs.sort_unstable();
                srcs.dedup();
                (!srcs.is_empty()).then(|| Hyperedge::new(srcs.into_iter().map(node).collect(), node(d), p))
            });
            build_graph((0..n).map(node), edges).unwrap()
        })
}

/// A graph with an activation schedule: the iteration at which each node
/// turns active, if ever.
pub fn scheduled(
    max_nodes: usize,
    max_edges: usize,
    max_sources: usize,
) -> impl Strategy<Value = (SocialItemGraph, Vec<Option<u32>>)> {
    graphs(max_nodes, max_edges, max_sources).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), vec(proptest::option::of(0u32..5), n))
    })
}

/// Graph plus a seed set.
pub fn seeded(
    max_nodes: usize,
    max_edges: usize,
    max_sources: usize,
) -> impl Strategy<Value = (SocialItemGraph, Vec<NodeId>)> {
    graphs(max_nodes, max_edges, max_sources).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), proptest::sample::subsequence((0..n as u32).collect::<Vec<_>>(), 1..=n))
            .prop_map(|(g, s)| (g, s.into_iter().map(NodeId).collect()))
    })
}

/// Nodes scheduled at `iteration`.
pub fn at(schedule: &[Option<u32>], iteration: u32) -> Vec<NodeId> {
    schedule
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == Some(iteration))
        .map(|(i, _)| NodeId(i as u32))
        .collect()
}

/// States after iterations `0..=last` of a schedule.
pub fn states(n: usize, schedule: &[Option<u32>], last: u32) -> Vec<DiffusionState> {
    let mut state = DiffusionState::new(n, &at(schedule, 0));
    let mut out = vec![state.clone()];
    for i in 1..=last {
        state.advance(&at(schedule, i));
        out.push(state.clone());
    }
    out
}
