//! Security games, the distinguishing reduction against the commitment
//! scheme, the hybrid locator, and the transformations between the two
//! security definitions.

use rand::RngCore;
use thiserror::Error;

use crate::scheme::{SchemeError, Share};
use crate::structures::PartySet;
use crate::we::SecretMessage;

pub mod adversaries;
pub mod equivalence;
pub mod games;
pub mod hybrid;
pub mod reduction;
pub mod report;
pub mod trials;

pub use games::{ind_game, sem_game, GameConfig};
pub use report::{hoeffding_radius, GameReport, DEFAULT_DELTA};
pub use trials::{run_trials, trial_rng, trial_seed, Execution};

/// Fewest trials a Monte-Carlo estimate accepts.
pub const MIN_TRIALS: usize = 100;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0} trials requested, at least {MIN_TRIALS} required")]
    Trials(usize),
    #[error("epsilon {0} outside (0, 1]")]
    Epsilon(f64),
    #[error("cannot decide M(X) exhaustively: {0}")]
    Infeasible(String),
    #[error("sampler produced secrets of lengths {0} and {1}")]
    SecretLengths(usize, usize),
    #[error("the two secrets agree on every bit, so there is no dictator function")]
    NoDictators,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// `(S_0, S_1, X, σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndSample {
    pub s0: SecretMessage,
    pub s1: SecretMessage,
    pub x: PartySet,
    pub sigma: Vec<u8>,
}

/// `(S, X, σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemSample {
    pub secret: SecretMessage,
    pub x: PartySet,
    pub sigma: Vec<u8>,
}

pub trait Sampler: Sync {
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> IndSample;
}

pub trait SemSampler: Sync {
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> SemSample;
}

/// What a distinguisher sees.
#[derive(Debug, Clone, Copy)]
pub struct View<'a> {
    pub s0: &'a SecretMessage,
    pub s1: &'a SecretMessage,
    pub shares: &'a [Share],
    pub x: &'a PartySet,
    pub sigma: &'a [u8],
}

pub trait Distinguisher: Sync {
    fn distinguish(&self, view: &View<'_>, rng: &mut dyn RngCore) -> bool;
}

/// Guesses `f(S)` from the shares of `X`.
pub trait Learner: Sync {
    fn learn(&self, shares: &[Share], x: &PartySet, sigma: &[u8], rng: &mut dyn RngCore) -> Vec<u8>;
}

/// Guesses `f(S)` without any shares.
pub trait Simulator: Sync {
    fn simulate(&self, x: &PartySet, sigma: &[u8], secret_len: usize, rng: &mut dyn RngCore) -> Vec<u8>;
}

/// The function of the secret a learner tries to compute.
pub trait TargetFn: Sync {
    fn apply(&self, secret: &[u8]) -> Vec<u8>;
}

impl<F: Fn(&[u8]) -> Vec<u8> + Sync> TargetFn for F {
    fn apply(&self, secret: &[u8]) -> Vec<u8> {
        self(secret)
    }
}

impl<T: Distinguisher + ?Sized> Distinguisher for &T {
    fn distinguish(&self, view: &View<'_>, rng: &mut dyn RngCore) -> bool {
        (**self).distinguish(view, rng)
    }
}

impl<T: Sampler + ?Sized> Sampler for &T {
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> IndSample {
        (**self).sample(n, rng)
    }
}

impl<T: SemSampler + ?Sized> SemSampler for &T {
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> SemSample {
        (**self).sample(n, rng)
    }
}

impl<T: Learner + ?Sized> Learner for &T {
    fn learn(&self, shares: &[Share], x: &PartySet, sigma: &[u8], rng: &mut dyn RngCore) -> Vec<u8> {
        (**self).learn(shares, x, sigma, rng)
    }
}

/// `⌈num / ε⌉`, tolerant of binary rounding in `ε`.
pub fn ceil_over_eps(num: usize, eps: f64) -> usize {
    let q = num as f64 / eps;
    let r = q.round();
    if (q - r).abs() < 1e-9 {
        r as usize
    } else {
        q.ceil() as usize
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<(), HarnessError> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(HarnessError::Epsilon(eps))
    }
}

pub(crate) fn check_trials(trials: usize) -> Result<(), HarnessError> {
    if trials < MIN_TRIALS {
        return Err(HarnessError::Trials(trials));
    }
    Ok(())
}
