//! Fixed-length bit words and their erasure-annotated counterparts.
//!
//! Words are indexed by position `0..len`, where position 0 is the most
//! significant position and comes first in the text form. The text form uses
//! one character per position: `0`, `1`, or `*` for an erased position.

use std::fmt;
use std::str::FromStr;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

/// Inline storage for up to 128 bits; longer words spill to the heap.
type Limbs = SmallVec<[u64; 2]>;

fn limb_count(len: usize) -> usize {
    len.div_ceil(64)
}

/// Mask selecting the valid bits of the last limb.
fn tail_mask(len: usize) -> u64 {
    match len % 64 {
        0 => u64::MAX,
        k => (1u64 << k) - 1,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordParseError {
    #[error("invalid word character {0:?} (expected '0', '1' or '*')")]
    BadChar(char),
    #[error("erased position in a clean word")]
    ErasureInCleanWord,
    #[error("empty word")]
    Empty,
}

/// A clean (noise-free) bit word of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    len: usize,
    limbs: Limbs,
}

impl BitWord {
    /// All-zero word of the given length.
    pub fn zero(len: usize) -> Self {
        BitWord { len, limbs: smallvec![0; limb_count(len)] }
    }

    /// Encodes `value` as a word of length `len`, most significant bit at
    /// position 0. Requires `len <= 64` and `value < 2^len`.
    pub fn from_index(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_index supports words up to 64 bits");
        if len < 64 {
            assert!(value < (1u64 << len), "value {value} does not fit in {len} bits");
        }
        let mut w = BitWord::zero(len);
        for pos in 0..len {
            // position 0 holds the most significant bit
            if value >> (len - 1 - pos) & 1 == 1 {
                w.set_bit(pos, true);
            }
        }
        w
    }

    /// Inverse of [`BitWord::from_index`]. Requires `len <= 64`.
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64, "to_index supports words up to 64 bits");
        let mut v = 0u64;
        for pos in 0..self.len {
            v = (v << 1) | self.bit(pos) as u64;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, pos: usize) -> bool {
        assert!(pos < self.len);
        self.limbs[pos / 64] >> (pos % 64) & 1 == 1
    }

    pub fn set_bit(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len);
        let mask = 1u64 << (pos % 64);
        if value {
            self.limbs[pos / 64] |= mask;
        } else {
            self.limbs[pos / 64] &= !mask;
        }
    }

    pub(crate) fn limbs(&self) -> &[u64] {
        &self.limbs
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.len {
            f.write_str(if self.bit(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(WordParseError::Empty);
        }
        let mut w = BitWord::zero(s.chars().count());
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set_bit(pos, true),
                '*' => return Err(WordParseError::ErasureInCleanWord),
                other => return Err(WordParseError::BadChar(other)),
            }
        }
        Ok(w)
    }
}

/// A word observed through an erasure channel: every position either carries
/// its bit value or is erased.
///
/// Invariant: erased positions always store a 0 value bit, so equality and
/// hashing depend only on the observable content.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoisyWord {
    len: usize,
    values: Limbs,
    erased: Limbs,
}

impl NoisyWord {
    /// A noise-free observation of `word` (no erasures).
    pub fn from_clean(word: &BitWord) -> Self {
        NoisyWord {
            len: word.len,
            values: word.limbs.clone(),
            erased: smallvec![0; limb_count(word.len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The observed bit, or `None` if the position is erased.
    pub fn bit(&self, pos: usize) -> Option<bool> {
        assert!(pos < self.len);
        if self.is_erased(pos) {
            None
        } else {
            Some(self.values[pos / 64] >> (pos % 64) & 1 == 1)
        }
    }

    pub fn is_erased(&self, pos: usize) -> bool {
        assert!(pos < self.len);
        self.erased[pos / 64] >> (pos % 64) & 1 == 1
    }

    /// Erases the position, dropping its value bit.
    pub fn erase(&mut self, pos: usize) {
        assert!(pos < self.len);
        self.erased[pos / 64] |= 1u64 << (pos % 64);
        self.values[pos / 64] &= !(1u64 << (pos % 64));
    }

    /// Sets a position to a known bit value.
    pub fn set_bit(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len);
        self.erased[pos / 64] &= !(1u64 << (pos % 64));
        let mask = 1u64 << (pos % 64);
        if value {
            self.values[pos / 64] |= mask;
        } else {
            self.values[pos / 64] &= !mask;
        }
    }

    pub fn erasure_count(&self) -> usize {
        self.erased.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// True when every position is erased.
    pub fn fully_erased(&self) -> bool {
        self.erasure_count() == self.len
    }

    /// Limbs of observed values (erased positions read as 0).
    pub(crate) fn value_limbs(&self) -> &[u64] {
        &self.values
    }

    /// Limbs with a 1 at every non-erased position.
    pub(crate) fn known_limb(&self, i: usize) -> u64 {
        let mut mask = !self.erased[i];
        if i == self.limbs_len() - 1 {
            mask &= tail_mask(self.len);
        }
        mask
    }

    pub(crate) fn limbs_len(&self) -> usize {
        self.values.len()
    }

    /// Packs a short word (`len <= 64`) into `(values, known)` bit masks,
    /// with position 0 of the word at bit `len-1` so the packing agrees with
    /// [`BitWord::to_index`] on unerased words.
    pub fn packed(&self) -> (u64, u64) {
        assert!(self.len <= 64, "packed supports words up to 64 bits");
        let mut values = 0u64;
        let mut known = 0u64;
        for pos in 0..self.len {
            let bit = 1u64 << (self.len - 1 - pos);
            if !self.is_erased(pos) {
                known |= bit;
                if self.values[pos / 64] >> (pos % 64) & 1 == 1 {
                    values |= bit;
                }
            }
        }
        (values, known)
    }
}

impl fmt::Display for NoisyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.len {
            match self.bit(pos) {
                None => f.write_str("*")?,
                Some(true) => f.write_str("1")?,
                Some(false) => f.write_str("0")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NoisyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NoisyWord({self})")
    }
}

impl FromStr for NoisyWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(WordParseError::Empty);
        }
        let mut w = NoisyWord::from_clean(&BitWord::zero(s.chars().count()));
        for (pos, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set_bit(pos, true),
                '*' => w.erase(pos),
                other => return Err(WordParseError::BadChar(other)),
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_is_msb_first() {
        let w = BitWord::from_index(0b110, 3);
        assert_eq!(w.to_string(), "110");
        assert_eq!(w.to_index(), 6);
        assert!(w.bit(0) && w.bit(1) && !w.bit(2));
    }

    #[test]
    fn text_roundtrip() {
        let w: NoisyWord = "01*1".parse().unwrap();
        assert_eq!(w.to_string(), "01*1");
        assert_eq!(w.bit(0), Some(false));
        assert_eq!(w.bit(2), None);
        assert_eq!(w.erasure_count(), 1);
    }

    #[test]
    fn erased_positions_do_not_affect_equality() {
        let mut a: NoisyWord = "11".parse().unwrap();
        let b: NoisyWord = "1*".parse().unwrap();
        a.erase(1);
        assert_eq!(a, b);
    }

    #[test]
    fn packed_matches_index_encoding() {
        let clean = BitWord::from_index(0b1011, 4);
        let mut noisy = NoisyWord::from_clean(&clean);
        assert_eq!(noisy.packed(), (0b1011, 0b1111));
        noisy.erase(0); // most significant position
        assert_eq!(noisy.packed(), (0b0011, 0b0111));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!("01x".parse::<NoisyWord>(), Err(WordParseError::BadChar('x')));
        assert_eq!("0*1".parse::<BitWord>(), Err(WordParseError::ErasureInCleanWord));
    }

    #[test]
    fn long_words_cross_limb_boundaries() {
        let mut w = NoisyWord::from_clean(&BitWord::zero(130));
        w.set_bit(0, true);
        w.set_bit(64, true);
        w.set_bit(129, true);
        w.erase(65);
        let s = w.to_string();
        assert_eq!(s.len(), 130);
        let back: NoisyWord = s.parse().unwrap();
        assert_eq!(back, w);
        assert_eq!(back.erasure_count(), 1);
    }
}
