//! Purchase nodes, hyperedges and the social item graph.
//!
//! A [`SocialItemGraph`] is immutable once built. Nodes are kept in ascending
//! `(user, item)` order and a node's [`NodeId`] is its position in that order,
//! so comparing ids compares nodes. Every internal structure (index paths,
//! tie-breaks, canonical source lists) relies on that.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// A purchase action: `user` bought `item`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PurchaseNode {
    pub user: String,
    pub item: String,
}

impl PurchaseNode {
    pub fn new(user: impl Into<String>, item: impl Into<String>) -> Self {
        Self {
            user: user.into(),
            item: item.into(),
        }
    }
}

impl fmt::Display for PurchaseNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.user, self.item)
    }
}

/// Dense node handle, valid for the graph that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Input form of a hyperedge, `sources -> dest` firing with probability `prob`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub sources: Vec<PurchaseNode>,
    pub dest: PurchaseNode,
    pub prob: f64,
}

impl Hyperedge {
    pub fn new(sources: Vec<PurchaseNode>, dest: PurchaseNode, prob: f64) -> Self {
        Self { sources, dest, prob }
    }
}

/// Stored form of a hyperedge. `sources` is sorted ascending and duplicate free.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub sources: Vec<NodeId>,
    pub dest: NodeId,
    pub prob: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SocialItemGraph {
    nodes: Vec<PurchaseNode>,
    edges: Vec<Edge>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

/// Validates and assembles a graph.
///
/// Duplicate nodes are merged. Hyperedges sharing the same `(sources, dest)`
/// collapse into one, keeping the position of the first occurrence and the
/// probability of the last.
pub fn build_graph(
    nodes: impl IntoIterator<Item = PurchaseNode>,
    edges: impl IntoIterator<Item = Hyperedge>,
) -> Result<SocialItemGraph, Error> {
    let mut nodes: Vec<PurchaseNode> = nodes.into_iter().collect();
    nodes.sort();
    nodes.dedup();
    let lookup = |n: &PurchaseNode| -> Result<NodeId, Error> {
        nodes
            .binary_search(n)
            .map(|i| NodeId(i as u32))
            .map_err(|_| Error::UnknownNode(format!("{n}")))
    };

    let mut stored: Vec<Edge> = Vec::new();
    let mut seen: BTreeMap<(Vec<NodeId>, NodeId), usize> = BTreeMap::new();
    for edge in edges {
        let mut sources = edge
            .sources
            .iter()
            .map(lookup)
            .collect::<Result<Vec<_>, _>>()?;
        let dest = lookup(&edge.dest)?;
        sources.sort_unstable();
        sources.dedup();
        let edge = Edge {
            sources,
            dest,
            prob: edge.prob,
        };
        validate_edge(&edge, &nodes)?;
        match seen.get(&(edge.sources.clone(), edge.dest)) {
            Some(&at) => stored[at].prob = edge.prob,
            None => {
                seen.insert((edge.sources.clone(), edge.dest), stored.len());
                stored.push(edge);
            }
        }
    }
    Ok(SocialItemGraph::assemble(nodes, stored))
}

fn validate_edge(edge: &Edge, nodes: &[PurchaseNode]) -> Result<(), Error> {
    if !(0.0..=1.0).contains(&edge.prob) {
        return Err(Error::ProbabilityOutOfRange(edge.prob));
    }
    if edge.sources.is_empty() {
        return Err(Error::EmptySources);
    }
    if edge.sources.binary_search(&edge.dest).is_ok() {
        return Err(Error::DestinationInSources(format!(
            "{}",
            nodes[edge.dest.index()]
        )));
    }
    Ok(())
}

impl SocialItemGraph {
    /// Builds a graph from already-indexed edges over `nodes` (which must be
    /// sorted and duplicate free). Edges are validated and deduplicated like
    /// [`build_graph`].
    pub fn from_indexed(nodes: Vec<PurchaseNode>, edges: Vec<Edge>) -> Result<Self, Error> {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut stored: Vec<Edge> = Vec::with_capacity(edges.len());
        let mut seen: BTreeMap<(Vec<NodeId>, NodeId), usize> = BTreeMap::new();
        for mut edge in edges {
            if let Some(bad) = edge
                .sources
                .iter()
                .chain(core::iter::once(&edge.dest))
                .find(|id| id.index() >= nodes.len())
            {
                return Err(Error::UnknownNode(format!("#{}", bad.0)));
            }
            edge.sources.sort_unstable();
            edge.sources.dedup();
            validate_edge(&edge, &nodes)?;
            let key = (edge.sources.clone(), edge.dest);
            match seen.get(&key) {
                Some(&at) => stored[at].prob = edge.prob,
                None => {
                    seen.insert(key, stored.len());
                    stored.push(edge);
                }
            }
        }
        Ok(Self::assemble(nodes, stored))
    }

    fn assemble(nodes: Vec<PurchaseNode>, edges: Vec<Edge>) -> Self {
        let mut incoming = alloc::vec![Vec::new(); nodes.len()];
        let mut outgoing = alloc::vec![Vec::new(); nodes.len()];
        for (id, edge) in edges.iter().enumerate() {
            incoming[edge.dest.index()].push(id);
            for s in &edge.sources {
                outgoing[s.index()].push(id);
            }
        }
        Self {
            nodes,
            edges,
            incoming,
            outgoing,
        }
    }

    /// Same node set, keeping only the edges accepted by `keep`.
    pub fn retain_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> Self {
        let edges = self.edges.iter().filter(|e| keep(e)).cloned().collect();
        Self::assemble(self.nodes.clone(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[PurchaseNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &PurchaseNode {
        &self.nodes[id.index()]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn node_id(&self, node: &PurchaseNode) -> Option<NodeId> {
        self.nodes.binary_search(node).ok().map(|i| NodeId(i as u32))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Ids of the hyperedges whose destination is `v`.
    pub fn incoming(&self, v: NodeId) -> &[usize] {
        &self.incoming[v.index()]
    }

    /// Ids of the hyperedges that list `v` among their sources.
    pub fn outgoing(&self, v: NodeId) -> &[usize] {
        &self.outgoing[v.index()]
    }

    /// Materializes edge `id` back into its input form.
    pub fn hyperedge(&self, id: usize) -> Hyperedge {
        let e = &self.edges[id];
        Hyperedge {
            sources: e.sources.iter().map(|s| self.node(*s).clone()).collect(),
            dest: self.node(e.dest).clone(),
            prob: e.prob,
        }
    }

    pub fn hyperedges(&self) -> impl Iterator<Item = Hyperedge> + '_ {
        (0..self.edges.len()).map(|i| self.hyperedge(i))
    }

    /// Largest source-set size over all hyperedges.
    pub fn max_hyperedge_size(&self) -> usize {
        self.edges.iter().map(|e| e.sources.len()).max().unwrap_or(0)
    }

    /// Checks that every id in `seeds` belongs to this graph.
    pub fn check_seeds(&self, seeds: &[NodeId]) -> Result<(), Error> {
        match seeds.iter().find(|s| s.index() >= self.nodes.len()) {
            Some(bad) => Err(Error::SeedOutOfRange(bad.0)),
            None => Ok(()),
        }
    }

    /// Keeps hyperedges whose endpoints all share one item (pure social influence).
    pub fn filter_social_only(&self) -> Self {
        self.retain_edges(|e| {
            let item = &self.node(e.dest).item;
            e.sources.iter().all(|s| &self.node(*s).item == item)
        })
    }

    /// Keeps hyperedges whose endpoints all share one user (pure item inference).
    pub fn filter_item_only(&self) -> Self {
        self.retain_edges(|e| {
            let user = &self.node(e.dest).user;
            e.sources.iter().all(|s| &self.node(*s).user == user)
        })
    }
}

/// Functional forms of [`SocialItemGraph::filter_social_only`] and
/// [`SocialItemGraph::filter_item_only`].
pub fn filter_social_only(graph: &SocialItemGraph) -> SocialItemGraph {
    graph.filter_social_only()
}

pub fn filter_item_only(graph: &SocialItemGraph) -> SocialItemGraph {
    graph.filter_item_only()
}
