//! Iteration-synchronous cascade over a social item graph.
//!
//! Seeds activate at iteration 0. At iteration `i`, an inactive node `v` is
//! activated with probability
//!
//! ```text
//! ap(v, i) = 1 - prod (1 - p_e)   over e = U -> v with U ⊆ A(i-1), U ⊄ A(i-2)
//! ```
//!
//! where `A(j)` is the active set after iteration `j`; i.e. only hyperedges
//! whose last source turned active in iteration `i - 1` get their single try.
//! All decisions of an iteration read the state frozen at its start, and each
//! decision uses the counter-addressed draw `u(run, i, v)`, activating iff
//! `u < ap`. The three engines differ only in how they find `ap`.

use alloc::vec;
use alloc::vec::Vec;

use crate::index::SigIndex;
use crate::{NodeId, RunStream, SocialItemGraph};

const INACTIVE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum EngineKind {
    /// Rescan every incoming hyperedge of every inactive node each iteration.
    Naive,
    /// Like `Naive`, with hyperedges pre-sorted by descending probability and
    /// the scan stopping once the node's draw is already decided.
    Sorting,
    /// Incremental per-destination prefix trees; only destinations reachable
    /// from newly active nodes are touched.
    #[default]
    SigIndex,
}

impl EngineKind {
    pub const ALL: [EngineKind; 3] = [EngineKind::Naive, EngineKind::Sorting, EngineKind::SigIndex];

    pub fn label(self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Sorting => "sorting",
            EngineKind::SigIndex => "sigindex",
        }
    }
}

/// Cascade progress: the iteration at which each node activated.
///
/// `iteration()` is the last completed iteration; the frontier is the set of
/// nodes activated in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionState {
    activated_at: Vec<u32>,
    frontier: Vec<NodeId>,
    iteration: u32,
    active_count: usize,
}

impl DiffusionState {
    /// Seeds active at iteration 0.
    pub fn new(node_count: usize, seeds: &[NodeId]) -> Self {
        let mut state = Self {
            activated_at: vec![INACTIVE; node_count],
            frontier: Vec::new(),
            iteration: 0,
            active_count: 0,
        };
        state.reset(seeds);
        state
    }

    /// `earlier` active before the last iteration, `latest` activated in it.
    pub fn with_history(node_count: usize, earlier: &[NodeId], latest: &[NodeId]) -> Self {
        let mut state = Self::new(node_count, earlier);
        state.advance(latest);
        state
    }

    fn reset(&mut self, seeds: &[NodeId]) {
        self.activated_at.fill(INACTIVE);
        self.frontier.clear();
        self.iteration = 0;
        self.active_count = 0;
        for &s in seeds {
            if self.activated_at[s.index()] == INACTIVE {
                self.activated_at[s.index()] = 0;
                self.frontier.push(s);
                self.active_count += 1;
            }
        }
    }

    /// Completes the next iteration, activating `newly` (already-active nodes
    /// are ignored).
    pub fn advance(&mut self, newly: &[NodeId]) {
        self.iteration += 1;
        self.frontier.clear();
        for &v in newly {
            if self.activated_at[v.index()] == INACTIVE {
                self.activated_at[v.index()] = self.iteration;
                self.frontier.push(v);
                self.active_count += 1;
            }
        }
    }

    pub fn is_active(&self, v: NodeId) -> bool {
        self.activated_at[v.index()] != INACTIVE
    }

    pub fn activated_at(&self, v: NodeId) -> Option<u32> {
        let at = self.activated_at[v.index()];
        (at != INACTIVE).then_some(at)
    }

    pub fn frontier(&self) -> &[NodeId] {
        &self.frontier
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    pub fn active_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.activated_at
            .iter()
            .enumerate()
            .filter(|(_, at)| **at != INACTIVE)
            .map(|(i, _)| NodeId(i as u32))
    }

    /// True iff every source is active and the last of them activated in the
    /// most recent iteration.
    #[inline]
    fn completed_last(&self, sources: &[NodeId]) -> bool {
        let mut latest = 0;
        for s in sources {
            let at = self.activated_at[s.index()];
            if at == INACTIVE {
                return false;
            }
            latest = latest.max(at);
        }
        latest == self.iteration
    }
}

/// Hyperedges into `v` that get their try in the next iteration.
pub fn qualifying_edges<'a>(
    graph: &'a SocialItemGraph,
    v: NodeId,
    state: &'a DiffusionState,
) -> impl Iterator<Item = usize> + 'a {
    graph
        .incoming(v)
        .iter()
        .copied()
        .filter(move |&e| state.completed_last(&graph.edge(e).sources))
}

/// Activation probability of `v` in the iteration after `state`.
pub fn activation_probability(graph: &SocialItemGraph, v: NodeId, state: &DiffusionState) -> f64 {
    1.0 - qualifying_edges(graph, v, state)
        .map(|e| 1.0 - graph.edge(e).prob)
        .product::<f64>()
}

/// Outcome of one cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub activated: usize,
    /// Iterations that activated at least one node.
    pub iterations: u32,
}

/// Reusable per-run buffers for [`Simulator::run`].
#[derive(Debug, Clone)]
pub struct Scratch {
    state: DiffusionState,
    newly: Vec<NodeId>,
    forks: Vec<Option<SigIndex>>,
    forked: Vec<NodeId>,
    touched: Vec<NodeId>,
    touched_flag: Vec<bool>,
}

impl Scratch {
    pub fn state(&self) -> &DiffusionState {
        &self.state
    }
}

/// Prepared engine over one graph. Immutable and shareable across threads;
/// each run owns a [`Scratch`].
#[derive(Debug, Clone)]
pub struct Simulator<'g> {
    graph: &'g SocialItemGraph,
    engine: EngineKind,
    sorted_incoming: Vec<Vec<usize>>,
    templates: Vec<Option<SigIndex>>,
    dests_of: Vec<Vec<NodeId>>,
}

impl<'g> Simulator<'g> {
    pub fn new(graph: &'g SocialItemGraph, engine: EngineKind) -> Self {
        let n = graph.node_count();
        let mut sim = Self {
            graph,
            engine,
            sorted_incoming: Vec::new(),
            templates: Vec::new(),
            dests_of: Vec::new(),
        };
        match engine {
            EngineKind::Naive => {}
            EngineKind::Sorting => {
                sim.sorted_incoming = graph
                    .node_ids()
                    .map(|v| {
                        let mut ids = graph.incoming(v).to_vec();
                        ids.sort_by(|a, b| {
                            graph.edge(*b).prob.total_cmp(&graph.edge(*a).prob).then(a.cmp(b))
                        });
                        ids
                    })
                    .collect();
            }
            EngineKind::SigIndex => {
                sim.templates = graph
                    .node_ids()
                    .map(|v| (!graph.incoming(v).is_empty()).then(|| SigIndex::build(graph, v)))
                    .collect();
                sim.dests_of = vec![Vec::new(); n];
                for v in graph.node_ids() {
                    let mut dests: Vec<NodeId> =
                        graph.outgoing(v).iter().map(|&e| graph.edge(e).dest).collect();
                    dests.sort_unstable();
                    dests.dedup();
                    sim.dests_of[v.index()] = dests;
                }
            }
        }
        sim
    }

    pub fn graph(&self) -> &'g SocialItemGraph {
        self.graph
    }

    pub fn engine(&self) -> EngineKind {
        self.engine
    }

    pub fn scratch(&self) -> Scratch {
        let n = self.graph.node_count();
        Scratch {
            state: DiffusionState::new(n, &[]),
            newly: Vec::new(),
            forks: if self.engine == EngineKind::SigIndex {
                vec![None; n]
            } else {
                Vec::new()
            },
            forked: Vec::new(),
            touched: Vec::new(),
            touched_flag: vec![false; n],
        }
    }

    /// Runs one cascade to quiescence. The final active set stays readable
    /// through `scratch.state()`.
    pub fn run(&self, scratch: &mut Scratch, seeds: &[NodeId], stream: &mut RunStream) -> RunSummary {
        scratch.state.reset(seeds);
        for v in scratch.forked.drain(..) {
            scratch.forks[v.index()] = None;
        }
        let mut iterations = 0;
        loop {
            let next = scratch.state.iteration + 1;
            scratch.newly.clear();
            match self.engine {
                EngineKind::Naive => self.step_naive(scratch, stream, next),
                EngineKind::Sorting => self.step_sorting(scratch, stream, next),
                EngineKind::SigIndex => self.step_index(scratch, stream, next),
            }
            if scratch.newly.is_empty() {
                break;
            }
            iterations += 1;
            let newly = core::mem::take(&mut scratch.newly);
            scratch.state.advance(&newly);
            scratch.newly = newly;
        }
        RunSummary {
            activated: scratch.state.active_count,
            iterations,
        }
    }

    fn step_naive(&self, scratch: &mut Scratch, stream: &mut RunStream, next: u32) {
        let state = &scratch.state;
        for v in self.graph.node_ids() {
            if state.is_active(v) {
                continue;
            }
            let mut keep = 1.0;
            for &e in self.graph.incoming(v) {
                let edge = self.graph.edge(e);
                if state.completed_last(&edge.sources) {
                    keep *= 1.0 - edge.prob;
                }
            }
            let ap = 1.0 - keep;
            if ap > 0.0 && stream.uniform(next, v) < ap {
                scratch.newly.push(v);
            }
        }
    }

    fn step_sorting(&self, scratch: &mut Scratch, stream: &mut RunStream, next: u32) {
        let state = &scratch.state;
        for v in self.graph.node_ids() {
            if state.is_active(v) {
                continue;
            }
            let mut keep = 1.0;
            let mut draw = None;
            for &e in &self.sorted_incoming[v.index()] {
                let edge = self.graph.edge(e);
                if edge.prob <= 0.0 {
                    break;
                }
                if !state.completed_last(&edge.sources) {
                    continue;
                }
                keep *= 1.0 - edge.prob;
                let u = *draw.get_or_insert_with(|| stream.uniform(next, v));
                if u < 1.0 - keep {
                    scratch.newly.push(v);
                    break;
                }
            }
        }
    }

    fn step_index(&self, scratch: &mut Scratch, stream: &mut RunStream, next: u32) {
        let Scratch {
            state,
            newly,
            forks,
            forked,
            touched,
            touched_flag,
        } = scratch;
        touched.clear();
        for &x in state.frontier() {
            for &d in &self.dests_of[x.index()] {
                if state.is_active(d) {
                    continue;
                }
                let slot = &mut forks[d.index()];
                if slot.is_none() {
                    forked.push(d);
                    *slot = self.templates[d.index()].as_ref().map(SigIndex::fork);
                }
                slot.as_mut().expect("destination has incoming edges").collapse(x);
                if !touched_flag[d.index()] {
                    touched_flag[d.index()] = true;
                    touched.push(d);
                }
            }
        }
        for &d in touched.iter() {
            touched_flag[d.index()] = false;
            let index = forks[d.index()].as_mut().expect("touched index exists");
            let ap = index.take_root_probability();
            if ap > 0.0 && stream.uniform(next, d) < ap {
                newly.push(d);
                forks[d.index()] = None;
            }
        }
        newly.sort_unstable();
    }
}

/// One cascade from `seeds`; returns the final active set in ascending order.
pub fn simulate_once(
    graph: &SocialItemGraph,
    seeds: &[NodeId],
    stream: &mut RunStream,
    engine: EngineKind,
) -> Vec<NodeId> {
    let sim = Simulator::new(graph, engine);
    let mut scratch = sim.scratch();
    sim.run(&mut scratch, seeds, stream);
    scratch.state.active_nodes().collect()
}

/// Mean and standard error of the adopted-node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdoptionEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub runs: u32,
}

impl AdoptionEstimate {
    /// From the integer sum and sum of squares of per-run counts. Integer sums
    /// are order independent, so any run schedule gives the same bits.
    pub fn from_sums(sum: u64, sum_sq: u128, runs: u32) -> Self {
        let n = runs as f64;
        let mean = sum as f64 / n;
        let std_error = if runs > 1 {
            let var = (sum_sq as f64 - n * mean * mean) / (n - 1.0);
            libm::sqrt(var.max(0.0) / n)
        } else {
            0.0
        };
        Self {
            mean,
            std_error,
            runs,
        }
    }
}

/// Monte Carlo estimate of expected adoption over `runs` cascades. Run `r`
/// uses stream `r` of `rng_seed`.
pub fn estimate_adoption_stats(
    graph: &SocialItemGraph,
    seeds: &[NodeId],
    runs: u32,
    engine: EngineKind,
    rng_seed: u64,
) -> AdoptionEstimate {
    let sim = Simulator::new(graph, engine);
    estimate_with(&sim, seeds, runs, rng_seed)
}

pub fn estimate_adoption(
    graph: &SocialItemGraph,
    seeds: &[NodeId],
    runs: u32,
    engine: EngineKind,
    rng_seed: u64,
) -> f64 {
    estimate_adoption_stats(graph, seeds, runs, engine, rng_seed).mean
}

/// Sequential estimate on a prepared simulator.
pub fn estimate_with(sim: &Simulator<'_>, seeds: &[NodeId], runs: u32, rng_seed: u64) -> AdoptionEstimate {
    assert!(runs >= 1, "at least one run");
    let mut scratch = sim.scratch();
    let (mut sum, mut sum_sq) = (0u64, 0u128);
    for run in 0..runs {
        let mut stream = RunStream::new(rng_seed, run as u64, sim.graph.node_count());
        let c = sim.run(&mut scratch, seeds, &mut stream).activated as u64;
        sum += c;
        sum_sq += (c as u128) * (c as u128);
    }
    AdoptionEstimate::from_sums(sum, sum_sq, runs)
}
