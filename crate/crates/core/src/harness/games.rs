use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{
    check_trials, run_trials, Distinguisher, Execution, GameReport, HarnessError, Learner, Sampler, SemSampler,
    Simulator, TargetFn, View, DEFAULT_DELTA,
};
use crate::scheme::Scheme;
use crate::structures::{AccessStructure, Effort, PartySet};
use crate::we::SecretMessage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub trials: usize,
    pub master_seed: u64,
    pub delta: f64,
    pub exec: Execution,
}

impl GameConfig {
    pub fn new(trials: usize, master_seed: u64) -> Self {
        Self {
            trials,
            master_seed,
            delta: DEFAULT_DELTA,
            exec: Execution::default(),
        }
    }
}

/// Exhaustive `M(X)` with memoization.
pub(crate) struct Qualified<'a> {
    structure: &'a AccessStructure,
    cache: Mutex<HashMap<PartySet, bool>>,
}

impl<'a> Qualified<'a> {
    pub(crate) fn new(structure: &'a AccessStructure) -> Self {
        Self {
            structure,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub(crate) fn get(&self, x: &PartySet) -> Result<bool, HarnessError> {
        if let Some(&q) = self.cache.lock().expect("cache lock").get(x) {
            return Ok(q);
        }
        let q = self
            .structure
            .evaluate(x, Effort::Exhaustive)
            .map_err(|e| HarnessError::Infeasible(e.to_string()))?;
        self.cache.lock().expect("cache lock").insert(x.clone(), q);
        Ok(q)
    }
}

struct Outcome {
    unqualified: bool,
    hit0: bool,
    hit1: bool,
}

fn tally(name: &str, outcomes: Vec<Result<Outcome, HarnessError>>, cfg: &GameConfig) -> Result<GameReport, HarnessError> {
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let count = |f: &dyn Fn(&Outcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let c0 = count(&|o| o.unqualified && o.hit0);
    let c1 = count(&|o| o.unqualified && o.hit1);
    let u0 = count(&|o| o.hit0);
    let u1 = count(&|o| o.hit1);
    let unq = count(&|o| o.unqualified);
    Ok(GameReport::new(name, cfg.trials, c0, c1, cfg.delta, cfg.master_seed).with_unconditioned(u0, u1, unq))
}

/// Estimates `|Pr[M(X)=0 ∧ D(shares(S_0))=1] − Pr[M(X)=0 ∧ D(shares(S_1))=1]|`.
pub fn ind_game(
    scheme: &Scheme,
    sampler: &dyn Sampler,
    d: &dyn Distinguisher,
    cfg: &GameConfig,
) -> Result<GameReport, HarnessError> {
    check_trials(cfg.trials)?;
    let qualified = Qualified::new(scheme.structure());
    let outcomes = run_trials(cfg.exec, cfg.master_seed, cfg.trials, |_, rng| {
        let s = sampler.sample(scheme.n(), rng);
        if s.s0.len() != s.s1.len() {
            return Err(HarnessError::SecretLengths(s.s0.len(), s.s1.len()));
        }
        let unqualified = !qualified.get(&s.x)?;
        let mut hit = [false; 2];
        for (b, secret) in [&s.s0, &s.s1].into_iter().enumerate() {
            let dealing = scheme.deal(secret, rng)?;
            let shares = dealing.shares_of(&s.x);
            let view = View {
                s0: &s.s0,
                s1: &s.s1,
                shares: &shares,
                x: &s.x,
                sigma: &s.sigma,
            };
            hit[b] = d.distinguish(&view, rng);
        }
        Ok(Outcome {
            unqualified,
            hit0: hit[0],
            hit1: hit[1],
        })
    });
    tally("ind", outcomes, cfg)
}

/// Estimates the gap between `Pr[M(X)=0 ∧ D(shares(S))=f(S)]` and
/// `Pr[M(X)=0 ∧ D'(X, σ)=f(S)]`.
pub fn sem_game(
    scheme: &Scheme,
    sampler: &dyn SemSampler,
    learner: &dyn Learner,
    simulator: &dyn Simulator,
    f: &dyn TargetFn,
    cfg: &GameConfig,
) -> Result<GameReport, HarnessError> {
    check_trials(cfg.trials)?;
    let qualified = Qualified::new(scheme.structure());
    let outcomes = run_trials(cfg.exec, cfg.master_seed, cfg.trials, |_, rng| {
        let s = sampler.sample(scheme.n(), rng);
        let unqualified = !qualified.get(&s.x)?;
        let target = f.apply(s.secret.as_bytes());
        let dealing = scheme.deal(&s.secret, rng)?;
        let shares = dealing.shares_of(&s.x);
        let hit0 = learner.learn(&shares, &s.x, &s.sigma, rng) == target;
        let hit1 = simulator.simulate(&s.x, &s.sigma, s.secret.len(), rng) == target;
        Ok(Outcome {
            unqualified,
            hit0,
            hit1,
        })
    });
    tally("sem", outcomes, cfg)
}

/// `0^len` as a secret.
pub fn zero_secret(len: usize) -> SecretMessage {
    SecretMessage::new(vec![0; len.max(1)]).expect("non-empty")
}
