use alloc::vec;
use alloc::vec::Vec;

use super::{generate_candidates, ActionLog, CandidateSet, EmsConfig};
use crate::embedding::{self, gaussian_weight, Embedding, ItemGraph};
use crate::{build_graph, Error, SocialGraph, SocialItemGraph};

/// E-step weights `p_e / (1 - prod(1 - p))` of the candidates explaining
/// action `a`, in `E_a` order. All zero when no candidate has positive
/// probability.
pub fn action_weights(cand: &CandidateSet, p: &[f64], a: usize) -> Vec<f64> {
    let ea = &cand.per_action()[a];
    let denom = explain_probability(ea, p);
    if denom <= 0.0 {
        return vec![0.0; ea.len()];
    }
    ea.iter().map(|&e| p[e] / denom).collect()
}

/// `1 - prod(1 - p)` over `ea`; a lone candidate returns its own
/// probability so that its weight is exactly one.
fn explain_probability(ea: &[usize], p: &[f64]) -> f64 {
    match ea {
        [e] => p[*e],
        _ => 1.0 - ea.iter().map(|&e| 1.0 - p[e]).product::<f64>(),
    }
}

/// `E[K_e]`: the E-step weights summed over actions.
pub fn expected_successes(cand: &CandidateSet, p: &[f64]) -> Vec<f64> {
    let mut k = vec![0.0; cand.edge_count()];
    for ea in cand.per_action() {
        let denom = explain_probability(ea, p);
        if denom <= 0.0 {
            continue;
        }
        for &e in ea {
            k[e] += p[e] / denom;
        }
    }
    k
}

/// One E-step and M-step: `p_e = E[K_e] / N_U`.
pub fn em_iterate(cand: &CandidateSet, p: &[f64]) -> Vec<f64> {
    let k = expected_successes(cand, p);
    (0..cand.edge_count())
        .map(|e| ratio(k[e], cand.edge_trials(e) as f64))
        .collect()
}

fn ratio(a: f64, t: f64) -> f64 {
    if t > 0.0 {
        (a / t).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Kernel-space coordinates: `F(e)` per candidate and `F(U)` (the source
/// blocks alone) per source set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Features {
    pub edges: Vec<Vec<f64>>,
    pub sources: Vec<Vec<f64>>,
}

impl Features {
    pub fn from_embedding(cand: &CandidateSet, emb: &Embedding) -> Result<Self, Error> {
        let edges = (0..cand.edge_count())
            .map(|e| embedding::hyperedge_vector(&cand.hyperedge(e, 0.0), emb))
            .collect::<Result<_, _>>()?;
        let sources = cand
            .source_sets()
            .iter()
            .map(|u| {
                let mut out = Vec::with_capacity(u.len() * 2 * emb.dim);
                for s in u {
                    emb.extend_node(cand.node(*s), &mut out)?;
                }
                Ok(out)
            })
            .collect::<Result<_, Error>>()?;
        Ok(Self { edges, sources })
    }
}

type Rows = Vec<Vec<(usize, f64)>>;

/// Precomputed, row-normalized Gaussian weights within each size class.
#[derive(Debug, Clone)]
pub struct Smoother {
    rows: Option<(Rows, Rows)>,
}

impl Smoother {
    /// The S-step that changes nothing (`h = 0`).
    pub fn identity() -> Self {
        Self { rows: None }
    }

    pub fn new(cand: &CandidateSet, features: &Features, h: f64) -> Result<Self, Error> {
        if h == 0.0 {
            return Ok(Self::identity());
        }
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidConfig("bandwidth must be nonnegative"));
        }
        if features.edges.len() != cand.edge_count() || features.sources.len() != cand.source_sets().len() {
            return Err(Error::InvalidConfig("features do not match the candidate set"));
        }
        let edge_class: Vec<usize> = cand.edges().iter().map(|c| c.sources.len()).collect();
        let set_class: Vec<usize> = cand.source_sets().iter().map(Vec::len).collect();
        Ok(Self {
            rows: Some((
                kernel_rows(&features.edges, &edge_class, h),
                kernel_rows(&features.sources, &set_class, h),
            )),
        })
    }

    /// `λ̂_A` from per-edge values.
    pub fn smooth_edges(&self, values: &[f64]) -> Vec<f64> {
        match &self.rows {
            None => values.to_vec(),
            Some((rows, _)) => apply(rows, values),
        }
    }

    /// `λ̂_T` from per-source-set values.
    pub fn smooth_sources(&self, values: &[f64]) -> Vec<f64> {
        match &self.rows {
            None => values.to_vec(),
            Some((_, rows)) => apply(rows, values),
        }
    }
}

fn kernel_rows(points: &[Vec<f64>], class: &[usize], h: f64) -> Rows {
    (0..points.len())
        .map(|i| {
            let mut row: Vec<(usize, f64)> = (0..points.len())
                .filter(|&j| class[j] == class[i])
                .map(|j| {
                    let d2: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                    (j, gaussian_weight(d2, h))
                })
                .filter(|&(_, w)| w > 0.0)
                .collect();
            let total: f64 = row.iter().map(|x| x.1).sum();
            for x in &mut row {
                x.1 /= total;
            }
            row
        })
        .collect()
}

fn apply(rows: &Rows, values: &[f64]) -> Vec<f64> {
    rows.iter()
        .map(|row| row.iter().map(|&(j, w)| w * values[j]).sum())
        .collect()
}

/// Kernel smoothing of `λ_A` (per edge) and `λ_T` (per source set) within
/// hyperedges of equal size. Weights are normalized per target.
pub fn s_step(
    cand: &CandidateSet,
    lambda_a: &[f64],
    lambda_t: &[f64],
    features: &Features,
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let s = Smoother::new(cand, features, h)?;
    Ok((s.smooth_edges(lambda_a), s.smooth_sources(lambda_t)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Per candidate, in [`CandidateSet::edges`] order.
    pub probs: Vec<f64>,
    pub iterations: u32,
    /// `false` when `max_iters` ran out first; `probs` is then the last iterate.
    pub converged: bool,
}

/// EMS: E-step, M-step and kernel S-step until no probability moves by
/// `tol`. With zero bandwidth this is plain EM and `features` is unused.
pub fn ems_fit(cand: &CandidateSet, cfg: &EmsConfig, features: &Features) -> Result<FitResult, Error> {
    cfg.validate()?;
    let smoother = Smoother::new(cand, features, cfg.bandwidth)?;
    Ok(fit_with(cand, cfg, &smoother))
}

/// Plain EM regardless of `cfg.bandwidth`.
pub fn em_fit(cand: &CandidateSet, cfg: &EmsConfig) -> Result<FitResult, Error> {
    cfg.validate()?;
    Ok(fit_with(cand, cfg, &Smoother::identity()))
}

fn fit_with(cand: &CandidateSet, cfg: &EmsConfig, smoother: &Smoother) -> FitResult {
    let raw: Vec<f64> = (0..cand.source_sets().len()).map(|u| cand.trials(u) as f64).collect();
    let lambda_t = smoother.smooth_sources(&raw);
    let mut p = vec![cfg.init_p; cand.edge_count()];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let lambda_a = smoother.smooth_edges(&expected_successes(cand, &p));
        let next: Vec<f64> = (0..cand.edge_count())
            .map(|e| ratio(lambda_a[e], lambda_t[cand.source_of(e)]))
            .collect();
        let delta = p.iter().zip(&next).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        p = next;
        if delta < cfg.tol {
            converged = true;
            break;
        }
    }
    FitResult {
        probs: p,
        iterations,
        converged,
    }
}

/// Keeps candidates with probability above `theta`. The graph's nodes are
/// the endpoints of the kept edges.
pub fn prune_and_build(cand: &CandidateSet, probs: &[f64], theta: f64) -> Result<SocialItemGraph, Error> {
    let kept: Vec<usize> = (0..cand.edge_count()).filter(|&e| probs[e] > theta).collect();
    let nodes = kept.iter().flat_map(|&e| {
        let c = &cand.edges()[e];
        c.sources.iter().chain([&c.dest]).map(|v| cand.node(*v).clone())
    });
    build_graph(nodes, kept.iter().map(|&e| cand.hyperedge(e, probs[e])))
}

/// Everything produced by [`learn`].
#[derive(Debug, Clone)]
pub struct LearnedModel {
    pub graph: SocialItemGraph,
    pub fit: FitResult,
    pub candidates: CandidateSet,
}

/// Candidates, embedding (only when smoothing), EMS and pruning in one go.
pub fn learn(
    log: &ActionLog,
    social: &SocialGraph,
    cfg: &EmsConfig,
    items: ItemGraph,
    dim: usize,
) -> Result<LearnedModel, Error> {
    let candidates = generate_candidates(log, social, cfg)?;
    let features = if cfg.bandwidth > 0.0 {
        let emb = embedding::embed_log(social, log, items, dim)?;
        Features::from_embedding(&candidates, &emb)?
    } else {
        Features::default()
    };
    let fit = ems_fit(&candidates, cfg, &features)?;
    let graph = prune_and_build(&candidates, &fit.probs, cfg.theta)?;
    Ok(LearnedModel {
        graph,
        fit,
        candidates,
    })
}
