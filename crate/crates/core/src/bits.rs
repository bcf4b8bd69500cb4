//! Bit strings with a fixed index convention.
//!
//! Bit 0 is the leftmost bit. When a bit string selects a basis state of an
//! `n`-qubit register, bit 0 is the most significant bit of the amplitude
//! index, i.e. `"10"` denotes basis state 2 of a 2-qubit register.

use std::fmt;
use std::ops::Index;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An ordered sequence of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Samples `len` independent uniform bits.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.random::<bool>()).collect(),
        }
    }

    /// Parses a string of `'0'` / `'1'` characters.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(Self { bits })
    }

    /// Interprets the `len` low bits of `index` as a bit string, bit 0 most
    /// significant.
    pub fn from_index(index: usize, len: usize) -> Self {
        let bits = (0..len)
            .map(|i| (index >> (len - 1 - i)) & 1 == 1)
            .collect();
        Self { bits }
    }

    /// Inverse of [`BitString::from_index`].
    pub fn to_index(&self) -> usize {
        debug_assert!(self.len() <= usize::BITS as usize);
        self.bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Bitwise XOR; both operands must have the same length.
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "xor of unequal-length bit strings");
        Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    /// The subsequence at positions where `selector` equals `value`,
    /// order-preserving, 0-based.
    pub fn restrict_by(&self, selector: &Self, value: bool) -> Self {
        assert_eq!(self.len(), selector.len(), "selector length mismatch");
        Self {
            bits: self
                .bits
                .iter()
                .zip(&selector.bits)
                .filter(|(_, &s)| s == value)
                .map(|(&b, _)| b)
                .collect(),
        }
    }

    /// Packs bits into bytes, most significant bit first; the final byte is
    /// zero-padded on the right.
    pub fn pack_msb_first(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for (i, b) in self.bits.iter().enumerate() {
            if *b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    /// Inverse of [`BitString::pack_msb_first`] given the original bit count.
    pub fn unpack_msb_first(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let bits = (0..len)
            .map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0)
            .collect();
        Some(Self { bits })
    }
}

impl Index<usize> for BitString {
    type Output = bool;

    fn index(&self, i: usize) -> &bool {
        &self.bits[i]
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitString::parse(&s).ok_or_else(|| D::Error::custom("bit string must match [01]*"))
    }
}

/// All bit strings of length `len` in lexicographic (index) order.
pub fn all_bitstrings(len: usize) -> impl Iterator<Item = BitString> {
    assert!(len < usize::BITS as usize);
    (0..1usize << len).map(move |i| BitString::from_index(i, len))
}
