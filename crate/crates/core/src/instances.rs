//! Small hand-built graphs with known answers, shared by tests, benchmarks
//! and the CLI.

use alloc::format;
use alloc::vec::Vec;

use crate::{build_graph, Hyperedge, NodeId, PurchaseNode, SocialItemGraph};

/// Five nodes `v1..v5` and nine hyperedges into `v5`:
/// `{v1} .5, {v1,v2} .4, {v1,v2,v3} .2, {v1,v2,v3,v4} .1, {v1,v3} .3,
/// {v1,v3,v4} .2, {v2} .2, {v2,v3,v4} .1, {v2,v4} .1`.
///
/// Returns the graph and the ids of `v1..v5` in order.
pub fn nine_edge_fan() -> (SocialItemGraph, [NodeId; 5]) {
    let v: Vec<PurchaseNode> = (1..=5)
        .map(|i| PurchaseNode::new(format!("v{i}"), "item"))
        .collect();
    let spec: [(&[usize], f64); 9] = [
        (&[0], 0.5),
        (&[0, 1], 0.4),
        (&[0, 1, 2], 0.2),
        (&[0, 1, 2, 3], 0.1),
        (&[0, 2], 0.3),
        (&[0, 2, 3], 0.2),
        (&[1], 0.2),
        (&[1, 2, 3], 0.1),
        (&[1, 3], 0.1),
    ];
    let edges = spec.iter().map(|(src, p)| {
        Hyperedge::new(
            src.iter().map(|i| v[*i].clone()).collect(),
            v[4].clone(),
            *p,
        )
    });
    let graph = build_graph(v.iter().cloned(), edges).expect("valid fixture");
    let ids = core::array::from_fn(|i| graph.node_id(&v[i]).expect("node present"));
    (graph, ids)
}

/// A hyperedge-aware greedy versus single-node greedy gap instance.
#[derive(Debug, Clone)]
pub struct GreedyGap {
    pub graph: SocialItemGraph,
    /// The `k` joint sources `u1..uk`.
    pub sources: Vec<NodeId>,
    /// The `m` sinks fed by `{u1..uk}` with probability one.
    pub sinks: Vec<NodeId>,
    /// The `k` decoys `u'1..u'k`, each with one `eps` edge to its own target.
    pub decoys: Vec<NodeId>,
}

/// `m` sinks all fed by one hyperedge each from the same `k` sources with
/// probability 1, plus `k` decoy edges `u'j -> x'j` with probability `eps`.
/// Picking the sources adopts `m + k`; picking decoys adopts `k + k * eps`.
pub fn greedy_gap(m: usize, k: usize, eps: f64) -> GreedyGap {
    let node = |prefix: &str, j: usize| PurchaseNode::new(format!("{prefix}{j:03}"), "item");
    let sources: Vec<_> = (0..k).map(|j| node("u", j)).collect();
    let sinks: Vec<_> = (0..m).map(|j| node("v", j)).collect();
    let decoys: Vec<_> = (0..k).map(|j| node("d", j)).collect();
    let targets: Vec<_> = (0..k).map(|j| node("x", j)).collect();

    let mut edges: Vec<Hyperedge> = sinks
        .iter()
        .map(|s| Hyperedge::new(sources.clone(), s.clone(), 1.0))
        .collect();
    edges.extend(
        decoys
            .iter()
            .zip(&targets)
            .map(|(d, x)| Hyperedge::new(alloc::vec![d.clone()], x.clone(), eps)),
    );
    let all = sources
        .iter()
        .chain(&sinks)
        .chain(&decoys)
        .chain(&targets)
        .cloned();
    let graph = build_graph(all, edges).expect("valid fixture");
    let ids = |ns: &[PurchaseNode]| ns.iter().map(|n| graph.node_id(n).unwrap()).collect();
    GreedyGap {
        sources: ids(&sources),
        sinks: ids(&sinks),
        decoys: ids(&decoys),
        graph,
    }
}

/// Non-submodular instance: `{u1, u2} -> w` with probability 1 and an
/// isolated filler `f`. Returns `(graph, [u1, u2, w, f])`.
///
/// With `S1 = {f}`, `S2 = {f, u1}` and `i = u2`, adding `i` gains 1 on `S1`
/// but 2 on the larger `S2`.
pub fn two_source_gate() -> (SocialItemGraph, [NodeId; 4]) {
    let ns = [
        PurchaseNode::new("u1", "item"),
        PurchaseNode::new("u2", "item"),
        PurchaseNode::new("w", "item"),
        PurchaseNode::new("f", "item"),
    ];
    let graph = build_graph(
        ns.iter().cloned(),
        [Hyperedge::new(
            alloc::vec![ns[0].clone(), ns[1].clone()],
            ns[2].clone(),
            1.0,
        )],
    )
    .expect("valid fixture");
    let ids = core::array::from_fn(|i| graph.node_id(&ns[i]).unwrap());
    (graph, ids)
}
