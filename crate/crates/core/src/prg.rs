//! SplitMix64 and the seed-expansion functions used by the commitment scheme.
//!
//! Two expanders are shipped. [`Expander::SplitMix64`] is the pinned reference:
//! `PRG(seed)` is the first `3k` bits of the SplitMix64 stream started at the
//! seed, output words concatenated little-endian. [`Expander::Toy`] runs the same
//! add-then-mix schedule on `k`-bit words (three outputs, one mix each) so it can
//! be expressed as a small Boolean circuit by the relation compiler.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
pub const MIX_MUL_1: u64 = 0xBF58_476D_1CE4_E5B9;
pub const MIX_MUL_2: u64 = 0x94D0_49BB_1331_11EB;

/// The SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }
}

/// First output of a SplitMix64 stream seeded with `x`.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    SplitMix64::new(x).next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Expander {
    #[default]
    #[serde(rename = "splitmix64")]
    SplitMix64,
    Toy,
}

/// Largest seed length accepted by the toy expander.
pub const TOY_MAX_SEED_BITS: usize = 16;

/// Parameters of the toy expander for a given word size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyParams {
    pub k: usize,
    pub increment: u64,
    pub mul1: u64,
    pub mul2: u64,
    pub shifts: [usize; 3],
}

impl ToyParams {
    pub fn new(k: usize) -> Self {
        assert!((1..=TOY_MAX_SEED_BITS).contains(&k));
        let mask = word_mask(k);
        // Shifts scaled from the 30/27/31 of the 64-bit finalizer.
        let scale = |s: usize| ((k * s + 32) / 64).clamp(1, k.saturating_sub(1).max(1));
        Self {
            k,
            increment: (GOLDEN_GAMMA & mask) | 1,
            mul1: (MIX_MUL_1 & mask) | 1,
            mul2: (MIX_MUL_2 & mask) | 1,
            shifts: [scale(30), scale(27), scale(31)],
        }
    }

    pub fn mix(&self, z: u64) -> u64 {
        let mask = word_mask(self.k);
        let mut z = z & mask;
        z = ((z ^ (z >> self.shifts[0])).wrapping_mul(self.mul1)) & mask;
        z = ((z ^ (z >> self.shifts[1])).wrapping_mul(self.mul2)) & mask;
        z ^ (z >> self.shifts[2])
    }

    /// The three `k`-bit output words for `seed`.
    pub fn words(&self, seed: u64) -> [u64; 3] {
        let mask = word_mask(self.k);
        let mut state = seed & mask;
        let mut out = [0u64; 3];
        for w in &mut out {
            state = (state + self.increment) & mask;
            *w = self.mix(state);
        }
        out
    }
}

pub fn word_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

impl Expander {
    pub fn max_seed_bits(self) -> usize {
        match self {
            Expander::SplitMix64 => 64,
            Expander::Toy => TOY_MAX_SEED_BITS,
        }
    }

    /// Expands a `k`-bit seed to `3k` bits.
    pub fn expand(self, seed: u64, k: usize) -> BitString {
        debug_assert!(k <= self.max_seed_bits());
        let seed = seed & word_mask(k);
        match self {
            Expander::SplitMix64 => {
                let words = 3 * k;
                let mut stream = SplitMix64::new(seed);
                let buf: Vec<u64> = (0..words.div_ceil(64)).map(|_| stream.next_u64()).collect();
                BitString::from_words(3 * k, &buf)
            }
            Expander::Toy => {
                let [a, b, c] = ToyParams::new(k).words(seed);
                BitString::from_fn(3 * k, |i| {
                    let w = [a, b, c][i / k];
                    (w >> (i % k)) & 1 == 1
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // Reference stream for seed 0 (matches the published C implementation).
        let mut s = SplitMix64::new(0);
        assert_eq!(s.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(s.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(s.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn splitmix_expansion_takes_low_bits_first() {
        let out = Expander::SplitMix64.expand(0, 8);
        assert_eq!(out.len(), 24);
        assert_eq!(out.words()[0], 0xE220_A839_7B1D_CDAF & 0xFF_FFFF);
    }

    #[test]
    fn toy_words_are_bijective_in_the_seed() {
        for k in [4, 6, 8] {
            let p = ToyParams::new(k);
            let mut seen = std::collections::HashSet::new();
            for s in 0..(1u64 << k) {
                assert!(seen.insert(p.words(s)[0]));
            }
        }
    }

    #[test]
    fn toy_shifts_for_k8() {
        assert_eq!(ToyParams::new(8).shifts, [4, 3, 4]);
    }
}
