//! Learning a social item graph from purchase logs: candidate hyperedges,
//! trial counts, and EM / EMS probability estimates.

mod candidates;
mod ems;
mod log;

pub use candidates::{co_occurrences, generate_candidates, Candidate, CandidateSet};
pub use ems::{
    action_weights, em_fit, em_iterate, ems_fit, expected_successes, learn, prune_and_build, s_step, Features,
    FitResult, LearnedModel, Smoother,
};
pub use log::{Action, ActionLog};

use crate::Error;

/// Hyperparameters of candidate mining and EMS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmsConfig {
    /// Largest hyperedge source set.
    pub mu: usize,
    /// Look-back for the buyer's own earlier purchases, in seconds.
    pub item_window: i64,
    /// Look-back for in-neighbours' purchases, in seconds.
    pub social_window: i64,
    /// Kernel bandwidth; 0 turns EMS into plain EM.
    pub bandwidth: f64,
    /// Learned edges must exceed this probability to be kept.
    pub theta: f64,
    pub max_iters: u32,
    /// Stop once no probability moves by this much.
    pub tol: f64,
    pub init_p: f64,
    /// Largest trigger pool per action.
    pub pool_cap: usize,
    /// Hard ceiling on `mu`.
    pub mu_limit: usize,
}

impl Default for EmsConfig {
    fn default() -> Self {
        Self {
            mu: 2,
            item_window: 86_400,
            social_window: 86_400,
            bandwidth: 1.0,
            theta: 0.1,
            max_iters: 200,
            tol: 1e-4,
            init_p: 0.1,
            pool_cap: 12,
            mu_limit: 4,
        }
    }
}

impl EmsConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.mu == 0 {
            return Err(Error::InvalidConfig("mu must be at least 1"));
        }
        if self.mu > self.mu_limit {
            return Err(Error::HyperedgeSizeLimit {
                mu: self.mu,
                limit: self.mu_limit,
            });
        }
        if self.item_window <= 0 || self.social_window <= 0 {
            return Err(Error::InvalidConfig("windows must be positive"));
        }
        if self.bandwidth.is_nan() || self.bandwidth < 0.0 {
            return Err(Error::InvalidConfig("bandwidth must be nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::InvalidConfig("theta must lie in [0, 1]"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        if !(self.init_p > 0.0 && self.init_p <= 1.0) {
            return Err(Error::InvalidConfig("init_p must lie in (0, 1]"));
        }
        if self.pool_cap == 0 {
            return Err(Error::InvalidConfig("pool_cap must be positive"));
        }
        Ok(())
    }
}
