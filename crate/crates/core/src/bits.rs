//! Fixed-length bitstrings and their mapping onto basis indices.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A classical bitstring `q0 q1 ... q(len-1)`.
///
/// Stored as the basis index it encodes: qubit `k` sits at bit position
/// `len - 1 - k`, so the binary rendering of [`BitString::index`] is the
/// bitstring itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    value: u64,
}

impl BitString {
    pub const MAX_LEN: usize = 64;

    /// All-zero string of the given length.
    pub fn zeros(len: usize) -> Result<Self> {
        if len > Self::MAX_LEN {
            return Err(Error::TooManyQubits {
                requested: len,
                max: Self::MAX_LEN,
            });
        }
        Ok(Self { len, value: 0 })
    }

    pub fn from_index(len: usize, index: u64) -> Result<Self> {
        let s = Self::zeros(len)?;
        if len < 64 && index >> len != 0 {
            return Err(Error::LengthMismatch {
                what: "basis index bit width",
                expected: len,
                found: 64 - index.leading_zeros() as usize,
            });
        }
        Ok(Self { value: index, ..s })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut s = Self::zeros(bits.len())?;
        for (k, &b) in bits.iter().enumerate() {
            s.set(k, b);
        }
        Ok(s)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Basis index encoded by this string.
    #[inline]
    pub fn index(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn get(&self, k: usize) -> bool {
        debug_assert!(k < self.len);
        self.value >> (self.len - 1 - k) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, k: usize, bit: bool) {
        debug_assert!(k < self.len);
        let mask = 1u64 << (self.len - 1 - k);
        if bit {
            self.value |= mask;
        } else {
            self.value &= !mask;
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|k| self.get(k)).collect()
    }
}

/// Read qubit `k` of basis index `index` in an `n`-qubit register.
#[inline]
pub fn qubit_bit(index: usize, n_qubits: usize, k: usize) -> bool {
    index >> (n_qubits - 1 - k) & 1 == 1
}

/// Single-bit mask of qubit `k` in an `n`-qubit register.
#[inline]
pub fn qubit_mask(n_qubits: usize, k: usize) -> usize {
    1usize << (n_qubits - 1 - k)
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|k| if self.get(k) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn leftmost_character_is_qubit_zero() {
        let b: BitString = "10".parse().unwrap();
        assert_eq!(b.index(), 2);
        assert!(b.get(0));
        assert!(!b.get(1));
        assert!(qubit_bit(2, 2, 0));
    }

    #[test]
    fn rejects_non_binary_characters() {
        assert_eq!("10x".parse::<BitString>(), Err(Error::InvalidBit('x')));
    }

    #[test]
    fn rejects_index_wider_than_length() {
        assert!(BitString::from_index(3, 8).is_err());
        assert_eq!(BitString::from_index(3, 7).unwrap().to_string(), "111");
    }

    #[test]
    fn set_and_display_round_trip() {
        let mut b = BitString::zeros(5).unwrap();
        b.set(1, true);
        b.set(4, true);
        assert_eq!(b.to_string(), "01001");
        assert_eq!(b.count_ones(), 2);
        b.set(1, false);
        assert_eq!(b.to_string(), "00001");
    }
}
