use rayon::prelude::*;
use sigmax_core::diffusion::{AdoptionEstimate, Simulator};
use sigmax_core::seeding::AdoptionEstimator;
use sigmax_core::{EngineKind, Error, NodeId, RunStream, SocialItemGraph};

/// Multi-threaded Monte Carlo. Runs are summed as integers, so the result is
/// bit-identical to the sequential estimate for any thread count.
pub fn estimate_parallel(sim: &Simulator<'_>, seeds: &[NodeId], runs: u32, rng_seed: u64) -> AdoptionEstimate {
    assert!(runs >= 1, "at least one run");
    let n = sim.graph().node_count();
    let (sum, sum_sq) = (0..runs as u64)
        .into_par_iter()
        .map_init(
            || sim.scratch(),
            |scratch, r| {
                let mut stream = RunStream::new(rng_seed, r, n);
                let c = sim.run(scratch, seeds, &mut stream).activated as u64;
                (c, c as u128 * c as u128)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    AdoptionEstimate::from_sums(sum, sum_sq, runs)
}

/// Parallel counterpart of the core Monte Carlo estimator, with the same
/// common-random-numbers behaviour.
#[derive(Debug, Clone, Copy)]
pub struct ParallelEstimator {
    pub runs: u32,
    pub engine: EngineKind,
    pub rng_seed: u64,
}

impl AdoptionEstimator for ParallelEstimator {
    fn adoption(&self, graph: &SocialItemGraph, seeds: &[NodeId]) -> Result<f64, Error> {
        graph.check_seeds(seeds)?;
        let sim = Simulator::new(graph, self.engine);
        Ok(estimate_parallel(&sim, seeds, self.runs, self.rng_seed).mean)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sigmax_core::diffusion::estimate_with;
    use sigmax_core::instances::nine_edge_fan;
    use sigmax_core::seeding::MonteCarloEstimator;

    #[test]
    fn matches_sequential_bits() {
        let (g, v) = nine_edge_fan();
        for engine in EngineKind::ALL {
            let sim = Simulator::new(&g, engine);
            let seq = estimate_with(&sim, &v[..3], 999, 5);
            let par = estimate_parallel(&sim, &v[..3], 999, 5);
            assert_eq!(seq, par);
        }
        let mc = MonteCarloEstimator {
            runs: 300,
            engine: EngineKind::SigIndex,
            rng_seed: 8,
        };
        let par = ParallelEstimator {
            runs: 300,
            engine: EngineKind::SigIndex,
            rng_seed: 8,
        };
        assert_eq!(mc.adoption(&g, &v[..2]).unwrap(), par.adoption(&g, &v[..2]).unwrap());
    }
}
