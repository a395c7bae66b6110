//! The reduction from a secret-sharing distinguisher to a distinguisher
//! between `Com(1..n)` and `Com(n+1..2n)`.

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::games::GameConfig;
use super::{ceil_over_eps, check_eps, check_trials, run_trials, Distinguisher, GameReport, HarnessError, IndSample, Sampler, View};
use crate::commitments::Commitment;
use crate::scheme::{Scheme, Share};
use crate::structures::PartySet;
use crate::we::SecretMessage;

/// Which commitment sequence the challenge is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// `Com(1, U), ..., Com(n, U)`.
    A0,
    /// `Com(n+1, U), ..., Com(2n, U)`.
    A1,
}

impl Hypothesis {
    fn offset(self, n: usize) -> usize {
        match self {
            Hypothesis::A0 => 0,
            Hypothesis::A1 => n,
        }
    }
}

/// Fresh commitments to `offset + 1, ..., offset + n`.
pub fn fresh_commitments(scheme: &Scheme, z: Hypothesis, rng: &mut dyn RngCore) -> Result<Vec<Commitment>, HarnessError> {
    let n = scheme.n();
    let offset = z.offset(n);
    scheme
        .sample_openings(rng)
        .iter()
        .enumerate()
        .map(|(i, op)| Ok(scheme.commit(offset + i + 1, op)?))
        .collect()
}

/// The shares of `X` built inside one Dver call: fresh openings for every
/// position, `Com(i, r_i)` substituted on `X`, the input kept elsewhere.
pub fn dver_shares(
    commitments: &[Commitment],
    secret: &SecretMessage,
    x: &PartySet,
    scheme: &Scheme,
    rng: &mut dyn RngCore,
) -> Result<Vec<Share>, HarnessError> {
    assert_eq!(commitments.len(), scheme.n(), "one commitment per party");
    let openings = scheme.sample_openings(rng);
    let substituted = commitments
        .iter()
        .enumerate()
        .map(|(i, com)| {
            if x.contains(i + 1) {
                scheme.commit(i + 1, &openings[i])
            } else {
                Ok(com.clone())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (_, ct) = scheme.seal(substituted, secret, rng)?;
    let header = scheme.header();
    Ok(x.members()
        .map(|p| Share {
            party: p,
            opening: openings[p - 1].clone(),
            ciphertext: ct.clone(),
            header: header.clone(),
        })
        .collect())
}

/// One Dver trial: 1 iff `D` recovers the uniformly chosen `b`.
pub fn dver(
    commitments: &[Commitment],
    sample: &IndSample,
    scheme: &Scheme,
    d: &dyn Distinguisher,
    rng: &mut dyn RngCore,
) -> Result<bool, HarnessError> {
    let b: bool = rng.gen();
    let secret = if b { &sample.s1 } else { &sample.s0 };
    let shares = dver_shares(commitments, secret, &sample.x, scheme, rng)?;
    let view = View {
        s0: &sample.s0,
        s1: &sample.s1,
        shares: &shares,
        x: &sample.x,
        sigma: &sample.sigma,
    };
    Ok(d.distinguish(&view, rng) == b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MestOutcome {
    pub fired: bool,
    pub q0: usize,
    pub q1: usize,
    pub rounds: usize,
}

/// Rounds Mest runs: `⌈4n/ε⌉`.
pub fn mest_rounds(n: usize, eps: f64) -> usize {
    ceil_over_eps(4 * n, eps)
}

/// Outer iterations of D': `⌈n/ε⌉`.
pub fn dprime_iterations(n: usize, eps: f64) -> usize {
    ceil_over_eps(n, eps)
}

/// The Mest decision rule: fire iff `|q0 − q1| > n`.
pub fn mest_fires(q0: usize, q1: usize, n: usize) -> bool {
    q0.abs_diff(q1) > n
}

/// Mest: Dver on fresh `A_0` and `A_1` commitments, `⌈4n/ε⌉` times each.
pub fn mest(
    sample: &IndSample,
    eps: f64,
    scheme: &Scheme,
    d: &dyn Distinguisher,
    rng: &mut dyn RngCore,
) -> Result<MestOutcome, HarnessError> {
    check_eps(eps)?;
    let n = scheme.n();
    let rounds = mest_rounds(n, eps);
    let (mut q0, mut q1) = (0, 0);
    for _ in 0..rounds {
        let a0 = fresh_commitments(scheme, Hypothesis::A0, rng)?;
        q0 += dver(&a0, sample, scheme, d, rng)? as usize;
        let a1 = fresh_commitments(scheme, Hypothesis::A1, rng)?;
        q1 += dver(&a1, sample, scheme, d, rng)? as usize;
    }
    Ok(MestOutcome {
        fired: mest_fires(q0, q1, n),
        q0,
        q1,
        rounds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DPrimeOutcome {
    pub output: bool,
    pub iterations: usize,
    /// The iteration at which Mest fired and the sample it fired on.
    pub fired: Option<(usize, IndSample)>,
}

/// D': sample until Mest fires, then answer with one Dver on the challenge.
pub fn dprime(
    commitments: &[Commitment],
    eps: f64,
    sampler: &dyn Sampler,
    d: &dyn Distinguisher,
    scheme: &Scheme,
    rng: &mut dyn RngCore,
) -> Result<DPrimeOutcome, HarnessError> {
    check_eps(eps)?;
    let n = scheme.n();
    let limit = dprime_iterations(n, eps);
    for t in 0..limit {
        let sample = sampler.sample(n, rng);
        if mest(&sample, eps, scheme, d, rng)?.fired {
            let output = dver(commitments, &sample, scheme, d, rng)?;
            return Ok(DPrimeOutcome {
                output,
                iterations: t + 1,
                fired: Some((t, sample)),
            });
        }
    }
    Ok(DPrimeOutcome {
        output: false,
        iterations: limit,
        fired: None,
    })
}

/// Runs D' on paired challenges: trial `i` uses the same random stream
/// under `A_0` and `A_1`. `count0`/`count1` count outputs of 1.
pub fn dprime_game(
    scheme: &Scheme,
    sampler: &dyn Sampler,
    d: &dyn Distinguisher,
    eps: f64,
    cfg: &GameConfig,
) -> Result<GameReport, HarnessError> {
    check_trials(cfg.trials)?;
    check_eps(eps)?;
    let outcomes = run_trials(cfg.exec, cfg.master_seed, cfg.trials, |_, rng| {
        let run = |z: Hypothesis, mut rng: ChaCha8Rng| -> Result<bool, HarnessError> {
            let challenge = fresh_commitments(scheme, z, &mut rng)?;
            Ok(dprime(&challenge, eps, sampler, d, scheme, &mut rng)?.output)
        };
        Ok::<_, HarnessError>((run(Hypothesis::A0, rng.clone())?, run(Hypothesis::A1, rng.clone())?))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let c0 = outcomes.iter().filter(|o| o.0).count();
    let c1 = outcomes.iter().filter(|o| o.1).count();
    Ok(GameReport::new("dprime", cfg.trials, c0, c1, cfg.delta, cfg.master_seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub trials: usize,
    /// `Pr[Dver = 1 | A_0]`.
    pub p0: f64,
    /// `Pr[Dver = 1 | A_1]`.
    pub p1: f64,
    pub estimate: f64,
    pub radius: f64,
}

/// Estimates `bias(S_0, S_1, X) = |Pr[Dver=1 | A_0] − Pr[Dver=1 | A_1]|`.
pub fn bias_estimate(
    sample: &IndSample,
    scheme: &Scheme,
    d: &dyn Distinguisher,
    cfg: &GameConfig,
) -> Result<BiasReport, HarnessError> {
    check_trials(cfg.trials)?;
    let outcomes = run_trials(cfg.exec, cfg.master_seed, cfg.trials, |_, rng| {
        let a0 = fresh_commitments(scheme, Hypothesis::A0, rng)?;
        let r0 = dver(&a0, sample, scheme, d, rng)?;
        let a1 = fresh_commitments(scheme, Hypothesis::A1, rng)?;
        let r1 = dver(&a1, sample, scheme, d, rng)?;
        Ok::<_, HarnessError>((r0, r1))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let t = cfg.trials as f64;
    let p0 = outcomes.iter().filter(|o| o.0).count() as f64 / t;
    let p1 = outcomes.iter().filter(|o| o.1).count() as f64 / t;
    Ok(BiasReport {
        trials: cfg.trials,
        p0,
        p1,
        estimate: (p0 - p1).abs(),
        radius: super::hoeffding_radius(cfg.trials, cfg.delta),
    })
}
