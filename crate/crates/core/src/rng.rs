use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::NodeId;

/// Counter-based uniform draws for one Monte Carlo run.
///
/// The draw for `(iteration, node)` depends only on `(seed, run, iteration,
/// node)`, never on how many draws came before, so every engine sees the same
/// coin for the same decision and runs can execute in any order.
#[derive(Debug, Clone)]
pub struct RunStream {
    rng: ChaCha8Rng,
    node_count: u128,
}

impl RunStream {
    pub fn new(seed: u64, run: u64, node_count: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(run);
        Self {
            rng,
            node_count: node_count.max(1) as u128,
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self, iteration: u32, node: NodeId) -> f64 {
        let slot = iteration as u128 * self.node_count + node.0 as u128;
        self.rng.set_word_pos(slot * 2);
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
