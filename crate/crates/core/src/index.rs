//! Per-destination prefix tree over hyperedge source combinations.
//!
//! Every hyperedge `U -> v` is inserted as a path `r -> u1 -> ... -> un` with
//! the sources in a fixed global order, and its probability sits on the last
//! vertex of the path. During a cascade, activating a node `x` collapses every
//! vertex labelled `x`: its probability merges into its parent by
//! `1 - (1 - p_x)(1 - p_parent)` and its children move up to the parent.
//! Whatever reaches the root in an iteration is exactly the aggregated
//! probability of the hyperedges that completed in that iteration, so reading
//! (and resetting) the root yields the activation probability of `v`.
//!
//! Vertices live in a flat arena with intrusive sibling links, so forking an
//! index for a new simulation run is a single `Vec` copy. Label lists never
//! change after construction and are shared between forks.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::{noisy_or, NodeId, SocialItemGraph};

const NIL: u32 = u32::MAX;
const ROOT: u32 = 0;

/// Order in which sources are laid out along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathOrder {
    /// Ascending node id.
    #[default]
    Ascending,
    /// Most frequent source (within this destination's hyperedges) first,
    /// ties by ascending id. This is the classic FP-tree layout.
    Frequency,
}

#[derive(Debug, Clone, Copy)]
struct Vertex {
    label: NodeId,
    prob: f64,
    parent: u32,
    first_child: u32,
    next_sibling: u32,
    prev_sibling: u32,
    alive: bool,
}

impl Vertex {
    fn new(label: NodeId, parent: u32) -> Self {
        Self {
            label,
            prob: 0.0,
            parent,
            first_child: NIL,
            next_sibling: NIL,
            prev_sibling: NIL,
            alive: true,
        }
    }
}

/// Work done by [`SigIndex::collapse`] since the index was built or forked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CollapseStats {
    /// Vertices examined through label lists.
    pub visits: u64,
    /// Child vertices moved to a new parent.
    pub reparents: u64,
}

/// One live vertex, reported with the labels on its root path.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    pub path: Vec<NodeId>,
    pub prob: f64,
}

#[derive(Debug, Clone)]
pub struct SigIndex {
    dest: NodeId,
    vertices: Vec<Vertex>,
    labels: Arc<Vec<(NodeId, Vec<u32>)>>,
    stats: CollapseStats,
}

impl SigIndex {
    /// Builds the index of `dest` with sources in ascending id order.
    pub fn build(graph: &SocialItemGraph, dest: NodeId) -> Self {
        Self::build_with_order(graph, dest, PathOrder::Ascending)
    }

    pub fn build_with_order(graph: &SocialItemGraph, dest: NodeId, order: PathOrder) -> Self {
        let incoming = graph.incoming(dest);
        let rank: BTreeMap<NodeId, (usize, NodeId)> = match order {
            PathOrder::Ascending => BTreeMap::new(),
            PathOrder::Frequency => {
                let mut freq: BTreeMap<NodeId, usize> = BTreeMap::new();
                for &e in incoming {
                    for s in &graph.edge(e).sources {
                        *freq.entry(*s).or_default() += 1;
                    }
                }
                freq.into_iter()
                    .map(|(id, f)| (id, (usize::MAX - f, id)))
                    .collect()
            }
        };

        let mut vertices = vec![Vertex::new(dest, NIL)];
        let mut labels: BTreeMap<NodeId, Vec<u32>> = BTreeMap::new();
        let mut path = Vec::new();
        for &e in incoming {
            let edge = graph.edge(e);
            path.clear();
            path.extend_from_slice(&edge.sources);
            if order == PathOrder::Frequency {
                path.sort_by_key(|s| rank[s]);
            }
            let mut at = ROOT;
            for &label in &path {
                at = match find_child(&vertices, at, label) {
                    Some(child) => child,
                    None => {
                        let id = vertices.len() as u32;
                        vertices.push(Vertex::new(label, at));
                        link_child(&mut vertices, at, id);
                        labels.entry(label).or_default().push(id);
                        id
                    }
                };
            }
            let v = &mut vertices[at as usize];
            v.prob = noisy_or(v.prob, edge.prob);
        }
        Self {
            dest,
            vertices,
            labels: Arc::new(labels.into_iter().collect()),
            stats: CollapseStats::default(),
        }
    }

    pub fn dest(&self) -> NodeId {
        self.dest
    }

    /// Independent copy for another simulation run.
    pub fn fork(&self) -> Self {
        let mut copy = self.clone();
        copy.stats = CollapseStats::default();
        copy
    }

    /// Merges every vertex labelled `activated` into its parent.
    pub fn collapse(&mut self, activated: NodeId) {
        let Ok(at) = self.labels.binary_search_by_key(&activated, |(l, _)| *l) else {
            return;
        };
        let labels = Arc::clone(&self.labels);
        for &v in &labels[at].1 {
            if !self.vertices[v as usize].alive {
                continue;
            }
            self.stats.visits += 1;
            self.remove_vertex(v);
        }
    }

    fn remove_vertex(&mut self, v: u32) {
        let Vertex {
            prob,
            parent,
            first_child,
            ..
        } = self.vertices[v as usize];
        let p = &mut self.vertices[parent as usize];
        p.prob = noisy_or(p.prob, prob);

        unlink_child(&mut self.vertices, v);
        let mut child = first_child;
        let mut last = NIL;
        while child != NIL {
            self.vertices[child as usize].parent = parent;
            self.stats.reparents += 1;
            last = child;
            child = self.vertices[child as usize].next_sibling;
        }
        if last != NIL {
            let head = self.vertices[parent as usize].first_child;
            self.vertices[last as usize].next_sibling = head;
            if head != NIL {
                self.vertices[head as usize].prev_sibling = last;
            }
            self.vertices[first_child as usize].prev_sibling = NIL;
            self.vertices[parent as usize].first_child = first_child;
        }
        let gone = &mut self.vertices[v as usize];
        gone.alive = false;
        gone.first_child = NIL;
        gone.prob = 0.0;
    }

    /// Reads the root probability and resets it to zero.
    pub fn take_root_probability(&mut self) -> f64 {
        core::mem::take(&mut self.vertices[ROOT as usize].prob)
    }

    pub fn root_probability(&self) -> f64 {
        self.vertices[ROOT as usize].prob
    }

    /// Live vertices, excluding the root.
    pub fn vertex_count(&self) -> usize {
        self.vertices[1..].iter().filter(|v| v.alive).count()
    }

    /// Live vertices currently carrying `label`.
    pub fn label_count(&self, label: NodeId) -> usize {
        match self.labels.binary_search_by_key(&label, |(l, _)| *l) {
            Ok(at) => self.labels[at]
                .1
                .iter()
                .filter(|&&v| self.vertices[v as usize].alive)
                .count(),
            Err(_) => 0,
        }
    }

    pub fn stats(&self) -> CollapseStats {
        self.stats
    }

    /// Every live vertex with its root path, depth-first with children in
    /// ascending label order.
    pub fn entries(&self) -> Vec<IndexEntry> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk(ROOT, &mut path, &mut out);
        out
    }

    fn walk(&self, at: u32, path: &mut Vec<NodeId>, out: &mut Vec<IndexEntry>) {
        let mut kids = Vec::new();
        let mut c = self.vertices[at as usize].first_child;
        while c != NIL {
            kids.push(c);
            c = self.vertices[c as usize].next_sibling;
        }
        kids.sort_by_key(|&c| (self.vertices[c as usize].label, c));
        for c in kids {
            let v = &self.vertices[c as usize];
            path.push(v.label);
            out.push(IndexEntry {
                path: path.clone(),
                prob: v.prob,
            });
            self.walk(c, path, out);
            path.pop();
        }
    }

    /// Probabilities stored on live vertices (root included).
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(i, v)| *i == 0 || v.alive)
            .map(|(_, v)| v.prob)
    }
}

fn find_child(vertices: &[Vertex], parent: u32, label: NodeId) -> Option<u32> {
    let mut c = vertices[parent as usize].first_child;
    while c != NIL {
        if vertices[c as usize].label == label {
            return Some(c);
        }
        c = vertices[c as usize].next_sibling;
    }
    None
}

fn link_child(vertices: &mut [Vertex], parent: u32, child: u32) {
    let head = vertices[parent as usize].first_child;
    vertices[child as usize].next_sibling = head;
    vertices[child as usize].prev_sibling = NIL;
    if head != NIL {
        vertices[head as usize].prev_sibling = child;
    }
    vertices[parent as usize].first_child = child;
}

fn unlink_child(vertices: &mut [Vertex], child: u32) {
    let Vertex {
        parent,
        next_sibling,
        prev_sibling,
        ..
    } = vertices[child as usize];
    if prev_sibling != NIL {
        vertices[prev_sibling as usize].next_sibling = next_sibling;
    } else {
        vertices[parent as usize].first_child = next_sibling;
    }
    if next_sibling != NIL {
        vertices[next_sibling as usize].prev_sibling = prev_sibling;
    }
    vertices[child as usize].next_sibling = NIL;
    vertices[child as usize].prev_sibling = NIL;
}
