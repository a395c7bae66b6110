//! Stock samplers and adversaries.

use rand::{Rng, RngCore};

use super::{Distinguisher, IndSample, Learner, Sampler, SemSample, SemSampler, Simulator, View};
use crate::commitments::find_opening;
use crate::induced::MPrimeInstance;
use crate::scheme::Share;
use crate::structures::PartySet;
use crate::we::{embedded_instance, leaked_message, SecretMessage};

fn random_secret(len: usize, rng: &mut dyn RngCore) -> SecretMessage {
    let mut bytes = vec![0u8; len.max(1)];
    rng.fill_bytes(&mut bytes);
    SecretMessage::new(bytes).expect("non-empty")
}

fn distinct_pair(len: usize, rng: &mut dyn RngCore) -> (SecretMessage, SecretMessage) {
    let s0 = random_secret(len, rng);
    let mut s1 = random_secret(len, rng).into_bytes();
    if s1 == s0.as_bytes() {
        s1[0] ^= 1;
    }
    (s0, SecretMessage::new(s1).expect("non-empty"))
}

/// Always the same sample.
pub struct FixedSampler(pub IndSample);

impl Sampler for FixedSampler {
    fn sample(&self, _: usize, _: &mut dyn RngCore) -> IndSample {
        self.0.clone()
    }
}

/// Emits `unqualified` with probability `p_unqualified`, else `qualified`,
/// with fresh distinct random secrets.
pub struct MixtureSampler {
    pub unqualified: PartySet,
    pub qualified: PartySet,
    pub p_unqualified: f64,
    pub secret_len: usize,
}

impl MixtureSampler {
    fn pick(&self, rng: &mut dyn RngCore) -> PartySet {
        if rng.gen_bool(self.p_unqualified) {
            self.unqualified.clone()
        } else {
            self.qualified.clone()
        }
    }
}

impl Sampler for MixtureSampler {
    fn sample(&self, _: usize, rng: &mut dyn RngCore) -> IndSample {
        let x = self.pick(rng);
        let (s0, s1) = distinct_pair(self.secret_len, rng);
        IndSample {
            s0,
            s1,
            x,
            sigma: Vec::new(),
        }
    }
}

impl SemSampler for MixtureSampler {
    fn sample(&self, _: usize, rng: &mut dyn RngCore) -> SemSample {
        let x = self.pick(rng);
        SemSample {
            secret: random_secret(self.secret_len, rng),
            x,
            sigma: Vec::new(),
        }
    }
}

pub struct Constant(pub bool);

impl Distinguisher for Constant {
    fn distinguish(&self, _: &View<'_>, _: &mut dyn RngCore) -> bool {
        self.0
    }
}

impl Learner for Constant {
    fn learn(&self, _: &[Share], _: &PartySet, _: &[u8], _: &mut dyn RngCore) -> Vec<u8> {
        vec![self.0 as u8]
    }
}

/// Reads what a leaky ciphertext exposes. As a distinguisher it outputs 1
/// iff the leak equals `S_1`; as a learner it returns the leak, or zeros.
pub struct LeakReader;

fn leak(shares: &[Share]) -> Option<SecretMessage> {
    leaked_message(&shares.first()?.ciphertext)
}

impl Distinguisher for LeakReader {
    fn distinguish(&self, view: &View<'_>, _: &mut dyn RngCore) -> bool {
        leak(view.shares).is_some_and(|m| &m == view.s1)
    }
}

impl Learner for LeakReader {
    fn learn(&self, shares: &[Share], _: &PartySet, _: &[u8], _: &mut dyn RngCore) -> Vec<u8> {
        match (leak(shares), shares.first()) {
            (Some(m), _) => m.into_bytes(),
            (None, Some(s)) => vec![0; s.ciphertext.msg_len()],
            (None, None) => vec![0],
        }
    }
}

/// Looks only at the byte sizes of the shares.
pub struct LengthOnly;

impl Distinguisher for LengthOnly {
    fn distinguish(&self, view: &View<'_>, _: &mut dyn RngCore) -> bool {
        view.shares.iter().map(|s| s.size().total()).sum::<usize>() % 2 == 1
    }
}

/// Uniform guess of `|S|` bytes.
pub struct Guess;

impl Simulator for Guess {
    fn simulate(&self, _: &PartySet, _: &[u8], secret_len: usize, rng: &mut dyn RngCore) -> Vec<u8> {
        random_secret(secret_len, rng).into_bytes()
    }
}

/// A distinguisher with a chosen Dver success rate under each hypothesis.
///
/// It reads `b` from the leak and tells `A_0` from `A_1` by brute-forcing
/// the first commitment outside `X` against its own index; it then answers
/// `b` with probability `p0` (under `A_0`) or `p1` (under `A_1`) and `1 − b`
/// otherwise. Without a leak it answers a fair coin.
pub struct PlantedBias {
    pub p0: f64,
    pub p1: f64,
}

impl PlantedBias {
    fn looks_like_a0(shares: &[Share], x: &PartySet) -> bool {
        let Some(first) = shares.first() else { return true };
        let Ok(inst) = embedded_instance::<MPrimeInstance>(&first.ciphertext) else {
            return true;
        };
        match (1..=inst.n()).find(|&j| !x.contains(j)) {
            None => true,
            Some(j) => find_opening(j, inst.crs(), &inst.commitments()[j - 1]).is_ok_and(|o| o.is_some()),
        }
    }
}

impl Distinguisher for PlantedBias {
    fn distinguish(&self, view: &View<'_>, rng: &mut dyn RngCore) -> bool {
        let Some(m) = leak(view.shares) else {
            return rng.gen();
        };
        let b = &m == view.s1;
        let p = if Self::looks_like_a0(view.shares, view.x) { self.p0 } else { self.p1 };
        if rng.gen_bool(p) {
            b
        } else {
            !b
        }
    }
}
