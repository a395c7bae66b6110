//! Locating the hybrid step that carries a list distinguisher's gap.
//!
//! Hybrid `C^(i)` takes values `1..=n-i` for the first `n-i` positions and
//! values `2n-i+1..=2n` for the rest, so `C^(0)` is all low values and
//! `C^(n)` all high values. Every trial draws one sample per value and one
//! coin stream, then evaluates all `n + 1` hybrids on them; the signed step
//! gaps therefore sum exactly to the end-to-end gap.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::games::GameConfig;
use super::{check_trials, hoeffding_radius, run_trials, HarnessError};
use crate::commitments::Opening;
use crate::scheme::Scheme;

/// Draws one sample for a value in `1..=2n`.
pub trait SampleSource: Sync {
    fn sample(&self, value: usize, rng: &mut dyn RngCore) -> Vec<u8>;
}

pub trait ListDistinguisher: Sync {
    fn distinguish(&self, list: &[Vec<u8>], rng: &mut dyn RngCore) -> bool;
}

/// Commitments `Com(value, U)` as samples.
pub struct CommitmentSource<'a> {
    pub scheme: &'a Scheme,
}

impl SampleSource for CommitmentSource<'_> {
    fn sample(&self, value: usize, rng: &mut dyn RngCore) -> Vec<u8> {
        let op = Opening::random(self.scheme.crs(), rng);
        self.scheme.commit(value, &op).expect("value within 1..=2n").bits().to_bytes()
    }
}

/// The value sampled at 1-based `position` of hybrid `i`.
pub fn hybrid_value(n: usize, i: usize, position: usize) -> usize {
    if position <= n - i {
        position
    } else {
        position + n
    }
}

/// `C^(i)` from per-value samples (`samples[v - 1]` is the sample for `v`).
pub fn hybrid_list(samples: &[Vec<u8>], n: usize, i: usize) -> Vec<Vec<u8>> {
    (1..=n).map(|p| samples[hybrid_value(n, i, p) - 1].clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridReport {
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    /// `hits[i]`: trials where D output 1 on `C^(i)`.
    pub hits: Vec<usize>,
    /// `gaps[i - 1] = Pr[D(C^(i-1))=1] − Pr[D(C^(i))=1]`.
    pub gaps: Vec<f64>,
    pub total_gap: f64,
    /// The located step `i`, maximizing `|gaps[i - 1]|`.
    pub index: usize,
    /// The differing position `n - i + 1` and its two values.
    pub position: usize,
    pub low_value: usize,
    pub high_value: usize,
    pub radius: f64,
}

impl HybridReport {
    pub fn located_gap(&self) -> f64 {
        self.gaps[self.index - 1]
    }
}

/// A single-sample distinguisher for `low_value` versus `high_value`: the
/// sample is planted at the located position with the rest of the list
/// filled as in hybrids `i - 1` and `i`.
pub struct PairwiseDistinguisher<'a> {
    list_d: &'a dyn ListDistinguisher,
    source: &'a dyn SampleSource,
    n: usize,
    position: usize,
}

impl PairwiseDistinguisher<'_> {
    pub fn distinguish(&self, sample: &[u8], rng: &mut dyn RngCore) -> bool {
        let list: Vec<Vec<u8>> = (1..=self.n)
            .map(|p| {
                if p == self.position {
                    sample.to_vec()
                } else if p < self.position {
                    self.source.sample(p, rng)
                } else {
                    self.source.sample(p + self.n, rng)
                }
            })
            .collect();
        self.list_d.distinguish(&list, rng)
    }
}

pub fn hybrid_locate<'a>(
    list_d: &'a dyn ListDistinguisher,
    n: usize,
    cfg: &GameConfig,
    source: &'a dyn SampleSource,
) -> Result<(HybridReport, PairwiseDistinguisher<'a>), HarnessError> {
    check_trials(cfg.trials)?;
    assert!(n >= 1);
    let rows = run_trials(cfg.exec, cfg.master_seed, cfg.trials, |_, rng| {
        let samples: Vec<Vec<u8>> = (1..=2 * n).map(|v| source.sample(v, rng)).collect();
        let coins = rng.next_u64();
        (0..=n)
            .map(|i| list_d.distinguish(&hybrid_list(&samples, n, i), &mut ChaCha8Rng::seed_from_u64(coins)))
            .collect::<Vec<bool>>()
    });
    let hits: Vec<usize> = (0..=n).map(|i| rows.iter().filter(|r| r[i]).count()).collect();
    let t = cfg.trials as f64;
    let gaps: Vec<f64> = (1..=n).map(|i| (hits[i - 1] as f64 - hits[i] as f64) / t).collect();
    let mut index = 1;
    for i in 2..=n {
        if gaps[i - 1].abs() > gaps[index - 1].abs() {
            index = i;
        }
    }
    let position = n - index + 1;
    let report = HybridReport {
        n,
        trials: cfg.trials,
        master_seed: cfg.master_seed,
        total_gap: (hits[0] as f64 - hits[n] as f64) / t,
        hits,
        gaps,
        index,
        position,
        low_value: position,
        high_value: position + n,
        radius: hoeffding_radius(cfg.trials, cfg.delta),
    };
    let pairwise = PairwiseDistinguisher {
        list_d,
        source,
        n,
        position,
    };
    Ok((report, pairwise))
}
