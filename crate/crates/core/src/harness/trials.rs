//! Independent trials with per-trial seeds.
//!
//! Trial `i` of a run with master seed `m` draws from a ChaCha stream seeded
//! by `splitmix64(m ^ i)`, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::prg::splitmix64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index)
}

pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

/// Runs `f` on trials `0..count`; results come back in trial order.
pub fn run_trials<T, F>(exec: Execution, master: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync + Send,
{
    let one = |i: usize| f(i, &mut trial_rng(master, i as u64));
    match exec {
        Execution::Sequential => (0..count).map(one).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..count).into_par_iter().map(one).collect(),
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => (0..count).map(one).collect(),
    }
}
