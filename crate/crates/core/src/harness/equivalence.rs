//! Transformations between the indistinguishability and unlearnability
//! games, and the simulators used with them.

use rand::{Rng, RngCore};

use super::games::zero_secret;
use super::{Distinguisher, HarnessError, IndSample, Learner, Sampler, SemSample, SemSampler, Simulator, TargetFn, View};
use crate::scheme::{Scheme, Share};
use crate::structures::PartySet;
use crate::we::SecretMessage;

/// Outputs `(0^{|S|}, S, X, σ)`.
pub struct ZeroVsSecret<'a> {
    inner: &'a dyn SemSampler,
}

impl Sampler for ZeroVsSecret<'_> {
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> IndSample {
        let s = self.inner.sample(n, rng);
        IndSample {
            s0: zero_secret(s.secret.len()),
            s1: s.secret,
            x: s.x,
            sigma: s.sigma,
        }
    }
}

/// 1 iff the learner's answer equals `f(S_1)`.
pub struct LearnerAsDistinguisher<'a> {
    learner: &'a dyn Learner,
    f: &'a dyn TargetFn,
}

impl Distinguisher for LearnerAsDistinguisher<'_> {
    fn distinguish(&self, view: &View<'_>, rng: &mut dyn RngCore) -> bool {
        self.learner.learn(view.shares, view.x, view.sigma, rng) == self.f.apply(view.s1.as_bytes())
    }
}

/// From an unlearnability adversary to an indistinguishability one.
pub fn sem_to_ind<'a>(
    samp: &'a dyn SemSampler,
    learner: &'a dyn Learner,
    f: &'a dyn TargetFn,
) -> (ZeroVsSecret<'a>, LearnerAsDistinguisher<'a>) {
    (ZeroVsSecret { inner: samp }, LearnerAsDistinguisher { learner, f })
}

/// `⟨S_0, S_1, σ⟩`.
pub fn pack_sigma(s0: &SecretMessage, s1: &SecretMessage, sigma: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + s0.len() + s1.len() + sigma.len());
    out.extend_from_slice(&(s0.len() as u32).to_le_bytes());
    out.extend_from_slice(s0.as_bytes());
    out.extend_from_slice(s1.as_bytes());
    out.extend_from_slice(sigma);
    out
}

pub fn unpack_sigma(packed: &[u8]) -> Option<(SecretMessage, SecretMessage, Vec<u8>)> {
    let len = u32::from_le_bytes(packed.get(..4)?.try_into().ok()?) as usize;
    let rest = &packed[4..];
    if rest.len() < 2 * len {
        return None;
    }
    let s0 = SecretMessage::new(rest[..len].to_vec()).ok()?;
    let s1 = SecretMessage::new(rest[len..2 * len].to_vec()).ok()?;
    Some((s0, s1, rest[2 * len..].to_vec()))
}

/// Bit `j` of `s` read as a big-endian integer; bit 0 is the least
/// significant bit of the last byte.
pub fn secret_bit(s: &[u8], j: usize) -> bool {
    let byte = j / 8;
    byte < s.len() && (s[s.len() - 1 - byte] >> (j % 8)) & 1 == 1
}

/// Bits on which `s0` and `s1` differ, below `t`.
pub fn dictators(s0: &[u8], s1: &[u8], t: usize) -> Vec<usize> {
    (0..t).filter(|&j| secret_bit(s0, j) != secret_bit(s1, j)).collect()
}

/// The dictator function on bit `j`, as a one-byte answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dictator(pub usize);

impl TargetFn for Dictator {
    fn apply(&self, secret: &[u8]) -> Vec<u8> {
        vec![secret_bit(secret, self.0) as u8]
    }
}

/// Draws `(S_0, S_1, X, σ)`, then a uniform `b`, and outputs
/// `(S_b, X, ⟨S_0, S_1, σ⟩)`.
pub struct RandomSide<'a> {
    inner: &'a dyn Sampler,
}

impl SemSampler for RandomSide<'_> {
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> SemSample {
        let s = self.inner.sample(n, rng);
        let b: bool = rng.gen();
        SemSample {
            sigma: pack_sigma(&s.s0, &s.s1, &s.sigma),
            secret: if b { s.s1 } else { s.s0 },
            x: s.x,
        }
    }
}

/// Runs the distinguisher on the unpacked secrets and answers the dictator
/// bit of the secret it points at (output 1 points at `S_1`).
pub struct DistinguisherAsLearner<'a> {
    d: &'a dyn Distinguisher,
    bit: usize,
}

impl Learner for DistinguisherAsLearner<'_> {
    fn learn(&self, shares: &[Share], x: &PartySet, sigma: &[u8], rng: &mut dyn RngCore) -> Vec<u8> {
        let Some((s0, s1, inner)) = unpack_sigma(sigma) else {
            return vec![0];
        };
        let view = View {
            s0: &s0,
            s1: &s1,
            shares,
            x,
            sigma: &inner,
        };
        let pick = if self.d.distinguish(&view, rng) { &s1 } else { &s0 };
        Dictator(self.bit).apply(pick.as_bytes())
    }
}

/// Guesses a side uniformly and answers its dictator bit.
pub struct CoinFlipSimulator {
    pub bit: usize,
}

impl Simulator for CoinFlipSimulator {
    fn simulate(&self, _: &PartySet, sigma: &[u8], _: usize, rng: &mut dyn RngCore) -> Vec<u8> {
        let Some((s0, s1, _)) = unpack_sigma(sigma) else {
            return vec![0];
        };
        let pick = if rng.gen() { s1 } else { s0 };
        Dictator(self.bit).apply(pick.as_bytes())
    }
}

/// The output of [`ind_to_sem`].
pub struct IndToSem<'a> {
    pub sampler: RandomSide<'a>,
    d: &'a dyn Distinguisher,
    /// Dictator bits on which the probed secrets differ.
    pub dictators: Vec<usize>,
}

impl<'a> IndToSem<'a> {
    pub fn learner(&self, bit: usize) -> DistinguisherAsLearner<'a> {
        DistinguisherAsLearner { d: self.d, bit }
    }

    pub fn simulator(&self, bit: usize) -> CoinFlipSimulator {
        CoinFlipSimulator { bit }
    }
}

/// From an indistinguishability adversary over `t`-bit secrets to a family
/// of unlearnability adversaries, one per dictator bit. The dictator set is
/// read off one draw of `samp` with `probe`.
pub fn ind_to_sem<'a>(
    samp: &'a dyn Sampler,
    d: &'a dyn Distinguisher,
    t: usize,
    n: usize,
    probe: &mut dyn RngCore,
) -> Result<IndToSem<'a>, HarnessError> {
    let s = samp.sample(n, probe);
    let dictators = dictators(s.s0.as_bytes(), s.s1.as_bytes(), t);
    if dictators.is_empty() {
        return Err(HarnessError::NoDictators);
    }
    Ok(IndToSem {
        sampler: RandomSide { inner: samp },
        d,
        dictators,
    })
}

/// `D'(X, σ) = D(shares(0^{|S|}, X), σ)`.
pub struct ZeroShareSimulator<'a> {
    pub scheme: &'a Scheme,
    pub learner: &'a dyn Learner,
}

impl Simulator for ZeroShareSimulator<'_> {
    fn simulate(&self, x: &PartySet, sigma: &[u8], secret_len: usize, rng: &mut dyn RngCore) -> Vec<u8> {
        let dealing = self.scheme.deal(&zero_secret(secret_len), rng).expect("scheme deals");
        self.learner.learn(&dealing.shares_of(x), x, sigma, rng)
    }
}
