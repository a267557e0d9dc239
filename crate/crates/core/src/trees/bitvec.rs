use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{TreeKind, TreeNode};
use crate::error::{Error, Result};

/// A finite `{0,1}`-sequence: a node of `T1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Self {
        BitVector { bits }
    }

    pub fn empty() -> Self {
        BitVector { bits: Vec::new() }
    }

    pub fn zeros(len: usize) -> Self {
        BitVector {
            bits: vec![false; len],
        }
    }

    /// Build from `0`/`1` integers; any nonzero value counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        BitVector {
            bits: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Entry `i`; panics when `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    /// The bits read as a binary number, entry 0 most significant.
    pub fn as_number(&self) -> u64 {
        assert!(self.bits.len() <= 64, "vector too long to encode");
        self.bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Inverse of [`BitVector::as_number`] for a given length.
    pub fn from_number(len: usize, value: u64) -> Self {
        BitVector {
            bits: (0..len)
                .map(|i| value.checked_shr((len - 1 - i) as u32).unwrap_or(0) & 1 == 1)
                .collect(),
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    /// Prefix of length `len`.
    pub fn prefix(&self, len: usize) -> Result<BitVector> {
        if len > self.len() {
            return Err(Error::usage(format!(
                "prefix length {len} exceeds vector length {}",
                self.len()
            )));
        }
        Ok(BitVector {
            bits: self.bits[..len].to_vec(),
        })
    }
}

impl TreeNode for BitVector {
    const KIND: TreeKind = TreeKind::T1;

    fn root() -> Self {
        BitVector::empty()
    }

    fn level(&self) -> usize {
        self.bits.len()
    }

    fn truncate(&self, level: usize) -> Self {
        BitVector {
            bits: self.bits[..level].to_vec(),
        }
    }

    fn is_below(&self, other: &Self) -> bool {
        self.len() <= other.len() && other.bits.starts_with(&self.bits)
    }

    fn meet(&self, other: &Self) -> Self {
        let common = self
            .bits
            .iter()
            .zip(&other.bits)
            .take_while(|(a, b)| a == b)
            .count();
        self.truncate(common)
    }

    fn branching(_level: usize) -> u64 {
        2
    }

    fn direction_at(&self, level: usize) -> u64 {
        u64::from(self.bits[level])
    }

    fn step(&self, dir: u64) -> Self {
        debug_assert!(dir < 2);
        let mut bits = self.bits.clone();
        bits.push(dir == 1);
        BitVector { bits }
    }

    fn free_bits(from: usize, to: usize) -> u32 {
        debug_assert!(from <= to);
        (to - from) as u32
    }

    fn fill(&self, to: usize, bits: u64) -> Self {
        let n = to - self.len();
        let mut out = self.bits.clone();
        out.extend((0..n).map(|i| bits.checked_shr((n - 1 - i) as u32).unwrap_or(0) & 1 == 1));
        BitVector { bits: out }
    }

    fn to_token(&self) -> String {
        self.to_string()
    }

    fn from_token(s: &str) -> Result<Self> {
        s.parse()
    }
}

impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("-");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl std::str::FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(BitVector::empty());
        }
        if s.is_empty() {
            return Err(Error::parse(1, "empty vector must be written as `-`"));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(1, format!("unexpected character `{other}` in vector"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector::new)
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
