//! Finite binary strings, exact dyadic arithmetic, prefix-free sets and the
//! online Kraft-Chaitin allocator.

mod dyadic;
mod kraft;
mod prefix;

pub use dyadic::Dyadic;
pub use kraft::{kraft_chaitin, KraftChaitin, KraftError};
pub use prefix::{check_prefix_free, measure_of, NotPrefixFree, PrefixFreeSet};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Token used for the empty string in text form.
pub const EMPTY_TOKEN: &str = "ε";

/// A finite binary string.
///
/// The derived ordering is lexicographic with a proper prefix sorting before
/// its extensions, which is a strict total order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn empty() -> Self {
        Bits(Vec::new())
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    /// `0^n`.
    pub fn zeros(n: usize) -> Self {
        Bits(vec![false; n])
    }

    /// `1^n`.
    pub fn ones(n: usize) -> Self {
        Bits(vec![true; n])
    }

    /// The length-`len` string spelling `value` in binary, most significant bit first.
    pub fn from_value(value: u128, len: usize) -> Self {
        assert!(len <= 128, "Bits::from_value supports at most 128 bits");
        Bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1).collect())
    }

    /// Reads the string as a big-endian binary number.
    pub fn value(&self) -> u128 {
        assert!(self.len() <= 128, "Bits::value supports at most 128 bits");
        self.0.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &Bits) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self ≺ other`.
    pub fn is_proper_prefix_of(&self, other: &Bits) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    /// Either string is a prefix of the other.
    pub fn is_compatible(&self, other: &Bits) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The prefix of length `n` (or the whole string when `n >= len`).
    pub fn prefix(&self, n: usize) -> Bits {
        Bits(self.0[..n.min(self.len())].to_vec())
    }

    /// Every prefix, shortest first, including the empty string and `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = Bits> + '_ {
        (0..=self.len()).map(move |n| self.prefix(n))
    }

    /// The suffix after dropping the first `n` bits.
    pub fn suffix(&self, n: usize) -> Bits {
        Bits(self.0[n.min(self.len())..].to_vec())
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Bits(v)
    }

    pub fn child(&self, bit: bool) -> Bits {
        let mut v = self.0.clone();
        v.push(bit);
        Bits(v)
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    /// All `2^len` strings of the given length, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Bits> {
        assert!(len < 64, "refusing to enumerate 2^{len} strings");
        (0..(1u64 << len)).map(move |v| Bits::from_value(v as u128, len))
    }

    /// All strings of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Bits> {
        (0..=max_len).flat_map(Bits::all_of_length)
    }

    /// All extensions of `self` of total length `len` (empty when `len < self.len()`).
    pub fn extensions_of_length(&self, len: usize) -> impl Iterator<Item = Bits> + '_ {
        let extra = len.checked_sub(self.len());
        extra
            .into_iter()
            .flat_map(move |k| Bits::all_of_length(k).map(move |t| self.concat(&t)))
    }

    /// `2^{-|self|}`, the measure of the cylinder `⟦self⟧`.
    pub fn weight(&self) -> Dyadic {
        Dyadic::pow2_neg(self.len() as u32)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str(EMPTY_TOKEN);
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid binary string {0:?}: expected '0'/'1' characters or the empty-string token")]
pub struct ParseBitsError(pub String);

impl FromStr for Bits {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == EMPTY_TOKEN || s.is_empty() {
            return Ok(Bits::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ParseBitsError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `bits("0110")`.
///
/// Panics on malformed input.
pub fn bits(s: &str) -> Bits {
    s.parse().expect("malformed bit string literal")
}
