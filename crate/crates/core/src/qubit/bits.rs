use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Measurement outcome of up to 64 qubits; bit `i` is qubit `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: usize,
    bits: u64,
}

impl BitString {
    pub fn new(width: usize, bits: u64) -> Result<Self> {
        if width > 64 {
            return Err(Error::invalid(format!("bit strings hold at most 64 bits, got {width}")));
        }
        if width < 64 && bits >> width != 0 {
            return Err(Error::invalid(format!("value {bits} does not fit in {width} bits")));
        }
        Ok(Self { width, bits })
    }

    pub fn zeros(width: usize) -> Self {
        Self::new(width, 0).expect("width checked by caller")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn flip(&self, i: usize) -> Self {
        Self {
            width: self.width,
            bits: self.bits ^ (1 << i),
        }
    }

    pub fn xor(&self, other: &BitString) -> Result<Self> {
        if self.width != other.width {
            return Err(Error::invalid("bit strings of different widths"));
        }
        Ok(Self {
            width: self.width,
            bits: self.bits ^ other.bits,
        })
    }

    /// All `2ⁿ` strings of width `n` in index order.
    pub fn all(width: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << width).map(move |bits| BitString { width, bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < 64 => bits |= 1 << i,
                '1' => {}
                _ => return Err(Error::invalid(format!("bit string contains {ch:?}"))),
            }
        }
        BitString::new(s.chars().count(), bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
