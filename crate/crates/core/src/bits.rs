//! Fixed-length bit strings.
//!
//! Bits are stored in 64-bit words, bit `i` living at `words[i / 64] >> (i % 64)`.
//! The byte encoding is the little-endian byte sequence of those words, truncated
//! to `ceil(len / 8)` bytes, so bit `i` is bit `i % 8` of byte `i / 8`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("invalid hex: {0}")]
    Hex(String),
    #[error("expected {expected} bytes for {bits} bits, got {got}")]
    Length {
        bits: usize,
        expected: usize,
        got: usize,
    },
    #[error("padding bits beyond bit {0} are not zero")]
    Padding(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut out = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Takes the low `len` bits of a word stream.
    pub fn from_words(len: usize, words: &[u64]) -> Self {
        let mut out = Self::zeros(len);
        let n = out.words.len();
        out.words.copy_from_slice(&words[..n]);
        out.clear_padding();
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        assert!(start + len <= self.len);
        BitString::from_fn(len, |i| self.get(start + i))
    }

    pub fn append(&mut self, other: &BitString) {
        let start = self.len;
        self.len += other.len;
        self.words.resize(self.len.div_ceil(64), 0);
        for i in 0..other.len {
            if other.get(i) {
                self.set(start + i, true);
            }
        }
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        BitString {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        bytes.truncate(self.len.div_ceil(8));
        bytes
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self, BitsError> {
        let expected = len.div_ceil(8);
        if bytes.len() != expected {
            return Err(BitsError::Length {
                bits: len,
                expected,
                got: bytes.len(),
            });
        }
        let mut out = Self::zeros(len);
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            out.words[i] = u64::from_le_bytes(buf);
        }
        let padded = out.clone();
        out.clear_padding();
        if out != padded {
            return Err(BitsError::Padding(len));
        }
        Ok(out)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(s: &str, len: usize) -> Result<Self, BitsError> {
        let bytes = hex::decode(s).map_err(|e| BitsError::Hex(e.to_string()))?;
        Self::from_bytes(&bytes, len)
    }

    fn clear_padding(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({}b, {})", self.len, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn byte_layout_is_little_endian_within_words() {
        let mut b = BitString::zeros(70);
        b.set(0, true);
        b.set(9, true);
        b.set(64, true);
        assert_eq!(b.to_bytes(), vec![1, 2, 0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn rejects_dirty_padding() {
        assert_eq!(
            BitString::from_bytes(&[0xff], 4),
            Err(BitsError::Padding(4))
        );
        assert!(BitString::from_bytes(&[0x0f], 4).is_ok());
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let b = BitString::from_fn(bits.len(), |i| bits[i]);
            let back = BitString::from_hex(&b.to_hex(), bits.len()).unwrap();
            prop_assert_eq!(back, b);
        }
    }
}
