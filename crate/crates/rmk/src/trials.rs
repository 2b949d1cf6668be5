//! Configuration for randomized / exhaustive search trials. Every suite
//! and search is deterministic given (seed, config).

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_worlds: usize,
    pub max_letters: u32,
    pub edge_prob: f64,
    pub letter_prob: f64,
    /// Depth bound for sampled formulas.
    pub max_depth: usize,
    /// Cap on definable-closure family size.
    pub closure_cap: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 1,
            trials: 1000,
            max_worlds: 6,
            max_letters: 2,
            edge_prob: 0.4,
            letter_prob: 0.5,
            max_depth: 5,
            closure_cap: 1 << 20,
        }
    }
}
