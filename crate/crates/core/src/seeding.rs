//! Seed selection: hyperedge-aware greedy (HAG) and the baselines it is
//! compared against.
//!
//! All selectors are generic over an [`AdoptionEstimator`], so the same code
//! runs against the exact oracle on small graphs and Monte Carlo elsewhere.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffusion::{estimate_with, Simulator};
use crate::exact::{exact_adoption_capped, DEFAULT_ENUMERATION_CAP};
use crate::{EngineKind, Error, NodeId, SocialItemGraph};

/// Default bound on the number of k-subsets examined by [`opt_select`].
pub const DEFAULT_OPT_CAP: u128 = 1_000_000;

/// Something that can score a seed set on a graph.
pub trait AdoptionEstimator {
    fn adoption(&self, graph: &SocialItemGraph, seeds: &[NodeId]) -> Result<f64, Error>;
}

impl<F> AdoptionEstimator for F
where
    F: Fn(&SocialItemGraph, &[NodeId]) -> Result<f64, Error>,
{
    fn adoption(&self, graph: &SocialItemGraph, seeds: &[NodeId]) -> Result<f64, Error> {
        self(graph, seeds)
    }
}

/// Exact expected adoption; see [`crate::exact`].
#[derive(Debug, Clone, Copy)]
pub struct ExactEstimator {
    pub cap: usize,
}

impl Default for ExactEstimator {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl AdoptionEstimator for ExactEstimator {
    fn adoption(&self, graph: &SocialItemGraph, seeds: &[NodeId]) -> Result<f64, Error> {
        exact_adoption_capped(graph, seeds, self.cap).map(|o| o.expected)
    }
}

/// Monte Carlo mean over `runs` cascades. Every call reuses `rng_seed`, so
/// competing seed sets are compared on common random numbers.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloEstimator {
    pub runs: u32,
    pub engine: EngineKind,
    pub rng_seed: u64,
}

impl AdoptionEstimator for MonteCarloEstimator {
    fn adoption(&self, graph: &SocialItemGraph, seeds: &[NodeId]) -> Result<f64, Error> {
        graph.check_seeds(seeds)?;
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be positive"));
        }
        let sim = Simulator::new(graph, self.engine);
        Ok(estimate_with(&sim, seeds, self.runs, self.rng_seed).mean)
    }
}

/// Number of seeds to pick; `1 <= k <= |V|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedBudget(usize);

impl SeedBudget {
    pub fn new(k: usize, graph: &SocialItemGraph) -> Result<Self, Error> {
        if k == 0 || k > graph.node_count() {
            return Err(Error::InvalidBudget {
                k,
                nodes: graph.node_count(),
            });
        }
        Ok(Self(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    SourceOfHyperedge,
    Singleton,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateCombination {
    /// Sorted, duplicate free.
    pub nodes: Vec<NodeId>,
    pub origin: Origin,
}

/// Distinct hyperedge source sets of size at most `remaining`, in edge order,
/// followed by the singleton of every node that is a source of some
/// hyperedge (skipping singletons already listed as source sets).
pub fn enumerate_combinations(graph: &SocialItemGraph, remaining: usize) -> Vec<CandidateCombination> {
    let mut seen: BTreeSet<&[NodeId]> = BTreeSet::new();
    let mut out = Vec::new();
    for edge in graph.edges() {
        if edge.sources.len() <= remaining && seen.insert(&edge.sources) {
            out.push(CandidateCombination {
                nodes: edge.sources.clone(),
                origin: Origin::SourceOfHyperedge,
            });
        }
    }
    if remaining == 0 {
        return out;
    }
    let sources: BTreeSet<NodeId> = graph
        .edges()
        .iter()
        .flat_map(|e| e.sources.iter().copied())
        .collect();
    for s in sources {
        if !seen.contains(&[s][..]) {
            out.push(CandidateCombination {
                nodes: alloc::vec![s],
                origin: Origin::Singleton,
            });
        }
    }
    out
}

/// Chosen seeds in selection order and their estimated adoption.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub seeds: Vec<NodeId>,
    pub adoption: f64,
}

#[derive(Debug, Clone, Default)]
pub struct HagOptions {
    /// Drop a combination for the rest of the run once its gain falls to or
    /// below this value.
    pub prune_below: Option<f64>,
    /// Only these nodes may become seeds.
    pub allowed: Option<Vec<NodeId>>,
}

/// Membership mask of an optional seed pool; `None` admits every node.
fn pool_mask(graph: &SocialItemGraph, allowed: Option<&[NodeId]>) -> Result<Vec<bool>, Error> {
    match allowed {
        None => Ok(alloc::vec![true; graph.node_count()]),
        Some(pool) => {
            graph.check_seeds(pool)?;
            let mut mask = alloc::vec![false; graph.node_count()];
            for v in pool {
                mask[v.index()] = true;
            }
            Ok(mask)
        }
    }
}

fn check_pool(budget: SeedBudget, mask: &[bool]) -> Result<(), Error> {
    let size = mask.iter().filter(|m| **m).count();
    if budget.get() > size {
        return Err(Error::InvalidBudget {
            k: budget.get(),
            nodes: size,
        });
    }
    Ok(())
}

struct Scored {
    new: Vec<NodeId>,
    value: f64,
    score: f64,
}

/// Higher score wins, then fewer new seeds, then the lexicographically
/// smaller node list.
fn better(a: &Scored, b: &Scored) -> bool {
    match a.score.total_cmp(&b.score) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (a.new.len(), &a.new) < (b.new.len(), &b.new),
    }
}

/// Hyperedge-aware greedy: each round adds the combination with the largest
/// adoption gain per newly added seed.
///
/// Candidates are the hyperedge source sets and the singleton of every node.
/// Stops at `k` seeds or when no candidate has positive gain, so fewer than
/// `k` seeds may come back.
pub fn hag_select<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    eval: &E,
) -> Result<Selection, Error> {
    hag_select_with(graph, budget, eval, HagOptions::default())
}

pub fn hag_select_with<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    eval: &E,
    options: HagOptions,
) -> Result<Selection, Error> {
    let k = budget.get();
    let mask = pool_mask(graph, options.allowed.as_deref())?;
    check_pool(budget, &mask)?;
    let mut combos: Vec<Vec<NodeId>> = enumerate_combinations(graph, k)
        .into_iter()
        .map(|c| c.nodes)
        .filter(|c| c.iter().all(|v| mask[v.index()]))
        .collect();
    let listed: BTreeSet<Vec<NodeId>> = combos.iter().cloned().collect();
    combos.extend(
        graph
            .node_ids()
            .filter(|v| mask[v.index()])
            .map(|v| alloc::vec![v])
            .filter(|c| !listed.contains(c)),
    );
    let mut pruned = alloc::vec![false; combos.len()];

    let mut seeds: Vec<NodeId> = Vec::new();
    let mut chosen: BTreeSet<NodeId> = BTreeSet::new();
    let mut base = 0.0;
    while seeds.len() < k {
        let remaining = k - seeds.len();
        let mut cache: BTreeMap<Vec<NodeId>, f64> = BTreeMap::new();
        let mut best: Option<Scored> = None;
        for (ci, combo) in combos.iter().enumerate() {
            if pruned[ci] {
                continue;
            }
            let new: Vec<NodeId> = combo.iter().copied().filter(|v| !chosen.contains(v)).collect();
            if new.is_empty() || new.len() > remaining {
                continue;
            }
            let value = match cache.get(&new) {
                Some(v) => *v,
                None => {
                    let mut trial = seeds.clone();
                    trial.extend_from_slice(&new);
                    let v = eval.adoption(graph, &trial)?;
                    cache.insert(new.clone(), v);
                    v
                }
            };
            let gain = value - base;
            if options.prune_below.is_some_and(|d| gain <= d) {
                pruned[ci] = true;
            }
            let cand = Scored {
                score: gain / new.len() as f64,
                new,
                value,
            };
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
        match best {
            Some(b) if b.score > 0.0 => {
                chosen.extend(b.new.iter().copied());
                seeds.extend(b.new);
                base = b.value;
            }
            _ => break,
        }
    }
    Ok(Selection {
        seeds,
        adoption: base,
    })
}

/// Single-node greedy: `k` rounds, each adding the node with the largest
/// marginal gain (ties to the smaller id).
pub fn sns_select<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    eval: &E,
) -> Result<Selection, Error> {
    sns_extend(graph, Vec::new(), budget, eval, None)
}

/// Single-node greedy continuing from `seeds` until there are `k` of them,
/// drawing only from `allowed` when given. Stops early if the pool runs dry.
pub fn sns_extend<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    mut seeds: Vec<NodeId>,
    budget: SeedBudget,
    eval: &E,
    allowed: Option<&[NodeId]>,
) -> Result<Selection, Error> {
    graph.check_seeds(&seeds)?;
    let mask = pool_mask(graph, allowed)?;
    let mut taken = alloc::vec![false; graph.node_count()];
    for s in &seeds {
        taken[s.index()] = true;
    }
    let mut base = if seeds.is_empty() { 0.0 } else { eval.adoption(graph, &seeds)? };
    while seeds.len() < budget.get() {
        let mut best: Option<(NodeId, f64)> = None;
        for v in graph.node_ids().filter(|v| !taken[v.index()] && mask[v.index()]) {
            seeds.push(v);
            let value = eval.adoption(graph, &seeds)?;
            seeds.pop();
            if best.is_none_or(|(_, b)| value > b) {
                best = Some((v, value));
            }
        }
        let Some((v, value)) = best else { break };
        taken[v.index()] = true;
        seeds.push(v);
        base = value;
    }
    Ok(Selection {
        seeds,
        adoption: base,
    })
}

/// `repetitions` independent uniform k-subsets, each sorted ascending.
pub fn ran_select(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    rng_seed: u64,
    repetitions: usize,
) -> Vec<Vec<NodeId>> {
    ran_select_within(graph, budget, rng_seed, repetitions, None).expect("budget fits the node set")
}

/// [`ran_select`] drawing from `allowed` when given.
pub fn ran_select_within(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    rng_seed: u64,
    repetitions: usize,
    allowed: Option<&[NodeId]>,
) -> Result<Vec<Vec<NodeId>>, Error> {
    let mask = pool_mask(graph, allowed)?;
    check_pool(budget, &mask)?;
    let pool: Vec<NodeId> = graph.node_ids().filter(|v| mask[v.index()]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok((0..repetitions)
        .map(|_| {
            let mut pick: Vec<NodeId> = rand::seq::index::sample(&mut rng, pool.len(), budget.get())
                .into_iter()
                .map(|i| pool[i])
                .collect();
            pick.sort_unstable();
            pick
        })
        .collect())
}

/// HAG on the social-influence-only subgraph. The returned adoption is
/// measured on the full graph.
pub fn soc_select<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    eval: &E,
) -> Result<Selection, Error> {
    let social = graph.filter_social_only();
    let mut sel = hag_select(&social, budget, eval)?;
    sel.adoption = eval.adoption(graph, &sel.seeds)?;
    Ok(sel)
}

/// Adoption of `seeds` when only item-inference hyperedges may fire.
pub fn ioc_evaluate<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    seeds: &[NodeId],
    eval: &E,
) -> Result<f64, Error> {
    eval.adoption(&graph.filter_item_only(), seeds)
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exhaustive search over every k-subset; the first subset (in lexicographic
/// order) with the highest adoption wins.
pub fn opt_select<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    eval: &E,
    cap: u128,
) -> Result<Selection, Error> {
    opt_select_within(graph, budget, eval, cap, None)
}

/// [`opt_select`] over subsets of `allowed` when given.
pub fn opt_select_within<E: AdoptionEstimator + ?Sized>(
    graph: &SocialItemGraph,
    budget: SeedBudget,
    eval: &E,
    cap: u128,
    allowed: Option<&[NodeId]>,
) -> Result<Selection, Error> {
    let mask = pool_mask(graph, allowed)?;
    check_pool(budget, &mask)?;
    let pool: Vec<NodeId> = graph.node_ids().filter(|v| mask[v.index()]).collect();
    let combinations = binomial(pool.len(), budget.get());
    if combinations > cap {
        return Err(Error::CombinationCap { combinations, cap });
    }
    let mut best: Option<Selection> = None;
    for subset in pool.into_iter().combinations(budget.get()) {
        let value = eval.adoption(graph, &subset)?;
        if best.as_ref().is_none_or(|b| value > b.adoption) {
            best = Some(Selection {
                seeds: subset,
                adoption: value,
            });
        }
    }
    Ok(best.expect("budget is at least one and at most |V|"))
}
