//! Perfectly-binding bit commitments in the common-random-string model.
//!
//! A value `v ∈ [1, 2n]` is written in `ℓ = ⌈log₂(2n+1)⌉` bits, least
//! significant first. Bit `j` is committed with its own `k`-bit seed:
//!
//! ```text
//! block_j = PRG(seed_j) XOR (bit_j(v) · crs_block_j)      (3k bits)
//! ```
//!
//! so the CRS is `ℓ·3k` bits, an opening is `ℓ` seeds (`ℓ·k` bits) and a
//! commitment is `ℓ` blocks. The PRG is an [`Expander`]. The absent opening ⊥
//! is `Option::None` throughout; it never has a bit pattern.

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitString, BitsError};
use crate::prg::{word_mask, Expander};

/// Smallest accepted seed length.
pub const MIN_SEED_BITS: usize = 4;
/// Largest seed length for exhaustive opening searches.
pub const MAX_ENUM_SEED_BITS: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CommitError {
    #[error("value {value} outside [1, {max}]")]
    ValueOutOfRange { value: usize, max: usize },
    #[error("opening has {got} seeds, expected {expected}")]
    OpeningLength { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("exhaustive enumeration refused for k = {0} (limit {MAX_ENUM_SEED_BITS})")]
    TooManySeedBits(usize),
    #[error(transparent)]
    Bits(#[from] BitsError),
}

/// `ℓ = ⌈log₂(2n+1)⌉`, the bit length of committed values.
pub fn value_bits(n: usize) -> usize {
    (usize::BITS - (2 * n).leading_zeros()) as usize
}

/// Common random string, with the parameters needed to interpret it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CrsDoc", into = "CrsDoc")]
pub struct Crs {
    n: usize,
    k: usize,
    expander: Expander,
    bits: BitString,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrsDoc {
    n: usize,
    k: usize,
    expander: Expander,
    bits: String,
}

impl TryFrom<CrsDoc> for Crs {
    type Error = CommitError;
    fn try_from(doc: CrsDoc) -> Result<Self, Self::Error> {
        check_params(doc.n, doc.k, doc.expander)?;
        let len = value_bits(doc.n) * 3 * doc.k;
        Ok(Crs {
            n: doc.n,
            k: doc.k,
            expander: doc.expander,
            bits: BitString::from_hex(&doc.bits, len)?,
        })
    }
}

impl From<Crs> for CrsDoc {
    fn from(c: Crs) -> Self {
        CrsDoc {
            n: c.n,
            k: c.k,
            expander: c.expander,
            bits: c.bits.to_hex(),
        }
    }
}

fn check_params(n: usize, k: usize, expander: Expander) -> Result<(), CommitError> {
    if n == 0 {
        return Err(CommitError::Params("n must be at least 1".into()));
    }
    if k < MIN_SEED_BITS || k > expander.max_seed_bits() {
        return Err(CommitError::Params(format!(
            "k = {k} outside {MIN_SEED_BITS}..={} for {expander:?}",
            expander.max_seed_bits()
        )));
    }
    Ok(())
}

/// Draws a uniformly random CRS for committing to values in `[1, 2n]`.
pub fn crs_gen(
    n: usize,
    k: usize,
    expander: Expander,
    rng: &mut dyn RngCore,
) -> Result<Crs, CommitError> {
    check_params(n, k, expander)?;
    let len = value_bits(n) * 3 * k;
    let words: Vec<u64> = (0..len.div_ceil(64)).map(|_| rng.next_u64()).collect();
    Ok(Crs {
        n,
        k,
        expander,
        bits: BitString::from_words(len, &words),
    })
}

impl Crs {
    pub fn from_bits(n: usize, k: usize, expander: Expander, bits: BitString) -> Result<Self, CommitError> {
        check_params(n, k, expander)?;
        let len = value_bits(n) * 3 * k;
        if bits.len() != len {
            return Err(CommitError::Params(format!("CRS must be {len} bits, got {}", bits.len())));
        }
        Ok(Crs { n, k, expander, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Seed length in bits.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn expander(&self) -> Expander {
        self.expander
    }

    /// `ℓ`, the number of committed bits per value.
    pub fn value_bits(&self) -> usize {
        value_bits(self.n)
    }

    pub fn block_bits(&self) -> usize {
        3 * self.k
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn block(&self, j: usize) -> BitString {
        self.bits.slice(j * self.block_bits(), self.block_bits())
    }

    pub fn max_value(&self) -> usize {
        2 * self.n
    }

    fn prg(&self, seed: u64) -> BitString {
        self.expander.expand(seed, self.k)
    }
}

/// An opening: one `k`-bit seed per committed bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Opening {
    seeds: Vec<u64>,
}

impl Opening {
    pub fn new(seeds: Vec<u64>) -> Self {
        Self { seeds }
    }

    pub fn random(crs: &Crs, rng: &mut dyn RngCore) -> Self {
        let mask = word_mask(crs.k);
        Self {
            seeds: (0..crs.value_bits()).map(|_| rng.next_u64() & mask).collect(),
        }
    }

    pub fn zeros(crs: &Crs) -> Self {
        Self {
            seeds: vec![0; crs.value_bits()],
        }
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    /// Seeds packed as `ℓ·k` bits, seed `j` at bits `[j·k, (j+1)·k)`.
    pub fn to_bits(&self, k: usize) -> BitString {
        BitString::from_fn(self.seeds.len() * k, |i| (self.seeds[i / k] >> (i % k)) & 1 == 1)
    }

    pub fn from_bits(bits: &BitString, k: usize) -> Self {
        Self {
            seeds: (0..bits.len() / k)
                .map(|j| (0..k).fold(0u64, |s, b| s | (bits.get(j * k + b) as u64) << b))
                .collect(),
        }
    }

    pub fn to_hex(&self, k: usize) -> String {
        self.to_bits(k).to_hex()
    }

    pub fn from_hex(s: &str, crs: &Crs) -> Result<Self, CommitError> {
        let bits = BitString::from_hex(s, crs.value_bits() * crs.k)?;
        Ok(Self::from_bits(&bits, crs.k))
    }
}

/// `ℓ` blocks of `3k` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Commitment {
    bits: BitString,
}

impl Commitment {
    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn block(&self, crs: &Crs, j: usize) -> BitString {
        self.bits.slice(j * crs.block_bits(), crs.block_bits())
    }

    pub fn to_hex(&self) -> String {
        self.bits.to_hex()
    }

    pub fn from_hex(s: &str, crs: &Crs) -> Result<Self, CommitError> {
        Ok(Self {
            bits: BitString::from_hex(s, crs.value_bits() * crs.block_bits())?,
        })
    }

    pub fn from_bits(bits: BitString, crs: &Crs) -> Result<Self, CommitError> {
        let len = crs.value_bits() * crs.block_bits();
        if bits.len() != len {
            return Err(CommitError::Params(format!("commitment must be {len} bits")));
        }
        Ok(Self { bits })
    }
}

fn value_bit(value: usize, j: usize) -> bool {
    (value >> j) & 1 == 1
}

/// `Com(value, opening)` under `crs`.
pub fn commit(value: usize, opening: &Opening, crs: &Crs) -> Result<Commitment, CommitError> {
    if value == 0 || value > crs.max_value() {
        return Err(CommitError::ValueOutOfRange {
            value,
            max: crs.max_value(),
        });
    }
    let ell = crs.value_bits();
    if opening.seeds.len() != ell {
        return Err(CommitError::OpeningLength {
            expected: ell,
            got: opening.seeds.len(),
        });
    }
    let mut bits = BitString::zeros(0);
    for (j, &seed) in opening.seeds.iter().enumerate() {
        let mut block = crs.prg(seed);
        if value_bit(value, j) {
            block = block.xor(&crs.block(j));
        }
        bits.append(&block);
    }
    Ok(Commitment { bits })
}

/// True iff `opening` is present and `commit(value, opening, crs) == com`.
pub fn verify_opening(value: usize, opening: Option<&Opening>, crs: &Crs, com: &Commitment) -> bool {
    match opening {
        Some(op) => commit(value, op, crs).is_ok_and(|c| &c == com),
        None => false,
    }
}

fn check_enumerable(crs: &Crs) -> Result<(), CommitError> {
    if crs.k > MAX_ENUM_SEED_BITS {
        return Err(CommitError::TooManySeedBits(crs.k));
    }
    Ok(())
}

/// Whether no pair of openings makes `v1` and `v2` commit to the same string.
///
/// Supports intersect iff every bit position where the values differ has a
/// seed pair with `PRG(s) = PRG(s') XOR crs_block_j`.
pub fn supports_disjoint(crs: &Crs, v1: usize, v2: usize) -> Result<bool, CommitError> {
    check_enumerable(crs)?;
    for v in [v1, v2] {
        if v == 0 || v > crs.max_value() {
            return Err(CommitError::ValueOutOfRange {
                value: v,
                max: crs.max_value(),
            });
        }
    }
    let outputs: Vec<BitString> = (0..1u64 << crs.k).map(|s| crs.prg(s)).collect();
    let plain: std::collections::HashSet<&BitString> = outputs.iter().collect();
    for j in 0..crs.value_bits() {
        if value_bit(v1, j) == value_bit(v2, j) {
            continue;
        }
        let mask = crs.block(j);
        if !outputs.iter().any(|o| plain.contains(&o.xor(&mask))) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exhaustively searches for an opening of `com` to `value`, one block at a time.
pub fn find_opening(value: usize, crs: &Crs, com: &Commitment) -> Result<Option<Opening>, CommitError> {
    check_enumerable(crs)?;
    if value == 0 || value > crs.max_value() {
        return Ok(None);
    }
    let mut seeds = Vec::with_capacity(crs.value_bits());
    for j in 0..crs.value_bits() {
        let mut target = com.block(crs, j);
        if value_bit(value, j) {
            target = target.xor(&crs.block(j));
        }
        match (0..1u64 << crs.k).find(|&s| crs.prg(s) == target) {
            Some(s) => seeds.push(s),
            None => return Ok(None),
        }
    }
    Ok(Some(Opening { seeds }))
}
