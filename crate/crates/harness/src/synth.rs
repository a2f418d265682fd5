//! Synthetic graphs and purchase logs with known ground truth.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigmax_core::diffusion::qualifying_edges;
use sigmax_core::learning::{Action, ActionLog};
use sigmax_core::seeding::binomial;
use sigmax_core::{
    build_graph, DiffusionState, Error, Hyperedge, NodeId, PurchaseNode, RunStream, SocialGraph, SocialItemGraph,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeTarget {
    Count(usize),
    /// Hyperedges per node, rounded to the nearest whole edge count.
    MeanInDegree(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbDist {
    Fixed(f64),
    Uniform { low: f64, high: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub nodes: usize,
    pub edges: EdgeTarget,
    /// Relative weight of source-set size `i + 1`.
    pub size_weights: Vec<f64>,
    pub probs: ProbDist,
    /// Node `i` is user `i / items` buying item `i % items`.
    pub items: usize,
    pub rng_seed: u64,
}

impl SyntheticSpec {
    pub fn new(nodes: usize, edges: EdgeTarget, rng_seed: u64) -> Self {
        Self {
            nodes,
            edges,
            size_weights: vec![0.6, 0.3, 0.1],
            probs: ProbDist::Uniform { low: 0.01, high: 0.2 },
            items: 1,
            rng_seed,
        }
    }

    pub fn edge_count(&self) -> usize {
        match self.edges {
            EdgeTarget::Count(m) => m,
            EdgeTarget::MeanInDegree(d) => (d * self.nodes as f64).round().max(0.0) as usize,
        }
    }
}

pub fn synthetic_node(i: usize, items: usize) -> PurchaseNode {
    let items = items.max(1);
    PurchaseNode::new(format!("u{:05}", i / items), format!("i{:03}", i % items))
}

/// Uniform random hyperedges: destination uniform, source-set size from
/// `size_weights`, sources uniform. Draws whose sources contain the
/// destination, or that repeat an earlier hyperedge, are redrawn.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SocialItemGraph, Error> {
    let n = spec.nodes;
    let m = spec.edge_count();
    let nodes: Vec<PurchaseNode> = (0..n).map(|i| synthetic_node(i, spec.items)).collect();
    if m == 0 {
        return build_graph(nodes, []);
    }
    let weights: Vec<f64> = spec
        .size_weights
        .iter()
        .enumerate()
        .map(|(i, w)| if i + 1 < n { *w } else { 0.0 })
        .collect();
    let possible: u128 = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 0.0)
        .map(|(i, _)| binomial(n - 1, i + 1).saturating_mul(n as u128))
        .fold(0, u128::saturating_add);
    if (m as u128) > possible {
        return Err(Error::Infeasible("more hyperedges requested than distinct ones exist"));
    }
    let sizes = WeightedIndex::new(&weights).map_err(|_| Error::Infeasible("no usable source-set size"))?;
    let (low, high) = match spec.probs {
        ProbDist::Fixed(p) => (p, p),
        ProbDist::Uniform { low, high } => (low, high),
    };
    if !(0.0..=1.0).contains(&low) || !(0.0..=1.0).contains(&high) || low > high {
        return Err(Error::InvalidConfig("probability range must lie in [0, 1]"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut seen: HashSet<(Vec<usize>, usize)> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    let mut attempts = 0usize;
    let budget = 1000 + 100 * m;
    while edges.len() < m {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Infeasible("too many rejected draws"));
        }
        let dest = rng.random_range(0..n);
        let size = sizes.sample(&mut rng) + 1;
        let mut sources = rand::seq::index::sample(&mut rng, n, size).into_vec();
        if sources.contains(&dest) {
            continue;
        }
        sources.sort_unstable();
        if !seen.insert((sources.clone(), dest)) {
            continue;
        }
        let p = if low == high { low } else { rng.random_range(low..=high) };
        edges.push(Hyperedge::new(
            sources.iter().map(|s| nodes[*s].clone()).collect(),
            nodes[dest].clone(),
            p,
        ));
    }
    build_graph(nodes, edges)
}

/// Social edges implied by a graph: every source user influences the
/// destination user (self-loops skipped).
pub fn social_from_graph(graph: &SocialItemGraph) -> SocialGraph {
    let mut social = SocialGraph::new();
    for node in graph.nodes() {
        social.add_user(node.user.clone());
    }
    for e in graph.edges() {
        let to = &graph.node(e.dest).user;
        for s in &e.sources {
            let from = &graph.node(*s).user;
            if from != to {
                social.add_edge(from.clone(), to.clone());
            }
        }
    }
    social
}

/// A graph to learn back, with the social graph and per-node seeding
/// probabilities used to generate its logs.
#[derive(Debug, Clone)]
pub struct Planted {
    pub graph: SocialItemGraph,
    pub social: SocialGraph,
    pub seed_prob: Vec<f64>,
}

/// Seeding probability of sources in well-observed communities.
pub const COMMON_SEEDING: f64 = 0.5;
/// Seeding probability of sources in sparsely observed communities.
pub const RARE_SEEDING: f64 = 0.0015;

/// Thirty nodes and forty hyperedges, all on one item.
///
/// Six communities have sources `s0, s1` and destinations `d0, d1`, with
/// singleton edges `{si} -> dj` and pair edges `{s0, s1} -> dj`. Two more
/// have a single source feeding two destinations. Sources influence every
/// destination of their community socially. Communities 4, 5 and 7 are
/// seeded rarely, the rest often.
pub fn planted_sig() -> Planted {
    let node = |name: String| PurchaseNode::new(name, "item");
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut seeding = Vec::new();
    let mut social = SocialGraph::new();
    for c in 0..6 {
        let q = if c < 4 { COMMON_SEEDING } else { RARE_SEEDING };
        let s = [node(format!("a{c}s0")), node(format!("a{c}s1"))];
        let d = [node(format!("a{c}d0")), node(format!("a{c}d1"))];
        for (j, dj) in d.iter().enumerate() {
            for (i, si) in s.iter().enumerate() {
                let p = 0.25 + 0.02 * c as f64 + 0.05 * ((i + j) % 2) as f64;
                edges.push(Hyperedge::new(vec![si.clone()], dj.clone(), p));
                social.add_edge(si.user.clone(), dj.user.clone());
            }
            edges.push(Hyperedge::new(s.to_vec(), dj.clone(), 0.5 + 0.03 * c as f64));
        }
        seeding.extend(s.iter().map(|x| (x.clone(), q)));
        nodes.extend(s.into_iter().chain(d));
    }
    for c in 0..2 {
        let q = if c == 0 { COMMON_SEEDING } else { RARE_SEEDING };
        let s = node(format!("c{c}s"));
        for j in 0..2 {
            let d = node(format!("c{c}d{j}"));
            edges.push(Hyperedge::new(vec![s.clone()], d.clone(), 0.3 + 0.05 * j as f64));
            social.add_edge(s.user.clone(), d.user.clone());
            nodes.push(d);
        }
        seeding.push((s.clone(), q));
        nodes.push(s);
    }
    let graph = build_graph(nodes, edges).expect("valid planted graph");
    let mut seed_prob = vec![0.0; graph.node_count()];
    for (n, q) in seeding {
        seed_prob[graph.node_id(&n).expect("seeded node").index()] = q;
    }
    Planted {
        graph,
        social,
        seed_prob,
    }
}

/// Simulated purchases plus the true number of tries each hyperedge got.
#[derive(Debug, Clone)]
pub struct CascadeLog {
    pub log: ActionLog,
    /// Per hyperedge: cascades in which it qualified while its destination
    /// was still inactive.
    pub trials: Vec<u64>,
}

/// Runs `cascades` independent cascades. Cascade `r` seeds node `v` with
/// probability `seed_prob[v]` and logs each activation at
/// `r * spacing + iteration`. Cascades deeper than `spacing - 1` iterations
/// are cut off so they never overlap the next one.
pub fn cascade_log(
    graph: &SocialItemGraph,
    seed_prob: &[f64],
    cascades: u32,
    spacing: i64,
    rng_seed: u64,
) -> CascadeLog {
    assert_eq!(seed_prob.len(), graph.node_count());
    assert!(spacing >= 1);
    let n = graph.node_count();
    let mut seeder = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut trials = vec![0u64; graph.edge_count()];
    let mut actions = Vec::new();
    for r in 0..cascades {
        let seeds: Vec<NodeId> = graph
            .node_ids()
            .filter(|v| {
                let q = seed_prob[v.index()];
                q > 0.0 && seeder.random::<f64>() < q
            })
            .collect();
        let mut state = DiffusionState::new(n, &seeds);
        let mut stream = RunStream::new(rng_seed, r as u64, n);
        while (state.iteration() as i64) < spacing - 1 {
            let next = state.iteration() + 1;
            let mut newly = Vec::new();
            for v in graph.node_ids().filter(|v| !state.is_active(*v)) {
                let mut keep = 1.0;
                for e in qualifying_edges(graph, v, &state) {
                    trials[e] += 1;
                    keep *= 1.0 - graph.edge(e).prob;
                }
                if keep < 1.0 && stream.uniform(next, v) < 1.0 - keep {
                    newly.push(v);
                }
            }
            if newly.is_empty() {
                break;
            }
            state.advance(&newly);
        }
        let base = r as i64 * spacing;
        for v in state.active_nodes() {
            let at = state.activated_at(v).expect("active node has a time");
            actions.push(Action::new(graph.node(v).clone(), base + at as i64));
        }
    }
    CascadeLog {
        log: ActionLog::new(actions),
        trials,
    }
}
