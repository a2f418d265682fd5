//! Social item graphs: hypergraphs over (user, item) purchase actions whose
//! hyperedges mix social influence and item inference.
//!
//! The crate covers the whole pipeline short of file IO:
//!
//! - [`graph`]: purchase nodes, hyperedges and the immutable [`SocialItemGraph`].
//! - [`exact`]: exact expected adoption over live-hyperedge worlds (test oracle).
//! - [`diffusion`]: the iteration-synchronous cascade and Monte Carlo estimation
//!   with three interchangeable activation-probability engines.
//! - [`index`]: the per-destination prefix tree that makes the cascade incremental.
//! - [`seeding`]: hyperedge-aware greedy seed selection and the baselines.
//! - [`learning`]: candidate hyperedges from purchase logs and EM / EMS fitting.
//! - [`embedding`]: MDS embeddings and the Gaussian kernel used for smoothing.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diffusion;
pub mod embedding;
mod error;
pub mod exact;
pub mod graph;
pub mod index;
pub mod instances;
pub mod learning;
mod rng;
pub mod seeding;
pub mod social;

pub use diffusion::{
    activation_probability, estimate_adoption, estimate_adoption_stats, simulate_once,
    AdoptionEstimate, DiffusionState, EngineKind, Simulator,
};
pub use error::Error;
pub use exact::{exact_adoption, ExactOutcome, DEFAULT_ENUMERATION_CAP};
pub use graph::{build_graph, Edge, Hyperedge, NodeId, PurchaseNode, SocialItemGraph};
pub use index::SigIndex;
pub use rng::RunStream;
pub use social::SocialGraph;

/// Complement-product aggregation `1 - (1 - a)(1 - b)`, evaluated as
/// `a + b - ab` so that a zero operand returns the other one unchanged.
#[inline]
pub fn noisy_or(a: f64, b: f64) -> f64 {
    a + b - a * b
}
