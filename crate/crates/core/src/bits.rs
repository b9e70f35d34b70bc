//! Basis-state bitstrings and the qubit/bit ordering convention.
//!
//! Qubit 0 is the most significant bit of the basis-state index. A state on
//! n qubits written `|b0 b1 ... b_{n-1}>` therefore has index
//! `sum_q b_q * 2^(n-1-q)`, and bitstrings render qubit 0 first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// An n-qubit computational basis state, stored as (width, index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: usize,
    index: u64,
}

impl BitString {
    pub fn new(width: usize, index: u64) -> Result<Self> {
        if width == 0 || width > 63 {
            return Err(Error::InvalidParameter(format!(
                "bitstring width {width} outside 1..=63"
            )));
        }
        if index >> width != 0 {
            return Err(Error::InvalidParameter(format!(
                "index {index} does not fit in {width} bits"
            )));
        }
        Ok(Self { width, index })
    }

    /// Parse a string of '0'/'1' characters, qubit 0 first.
    pub fn parse(s: &str, width: usize) -> Result<Self> {
        if s.len() != width || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::MalformedBitString(s.to_string(), width));
        }
        let mut index = 0u64;
        for b in s.bytes() {
            index = (index << 1) | u64::from(b - b'0');
        }
        Self::new(width, index)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Index into a 2^n amplitude array.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Value of qubit `q` (0 = most significant).
    pub fn qubit(&self, q: usize) -> bool {
        debug_assert!(q < self.width);
        (self.index >> (self.width - 1 - q)) & 1 == 1
    }

    /// The first `m` qubits as a prefix sub-string.
    pub fn prefix(&self, m: usize) -> u64 {
        self.index >> (self.width - m)
    }

    /// The last `m` qubits as a suffix sub-string.
    pub fn suffix(&self, m: usize) -> u64 {
        self.index & ((1 << m) - 1)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.width {
            write!(f, "{}", u8::from(self.qubit(q)))?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, s.len())
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Bit position (shift amount) of qubit `q` in an index over `n` qubits.
pub(crate) fn shift(n: usize, q: usize) -> u32 {
    debug_assert!(q < n);
    (n - 1 - q) as u32
}

/// Qubit indices `0..m` (the most significant block).
pub fn prefix_subset(m: usize) -> Vec<usize> {
    (0..m).collect()
}

/// Qubit indices `n-m..n` (the least significant block).
pub fn suffix_subset(n: usize, m: usize) -> Vec<usize> {
    (n - m..n).collect()
}
