//! Packed binary strings and Hamming distance.
//!
//! Bit `i` (zero based) lives in word `i / 64` at position `i % 64`. Storage
//! past the logical length is always zero, so word-wise XOR + popcount gives
//! the distance directly.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, GhdError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(invalid("bit string length must be at least 1"));
        }
        Ok(Self {
            len,
            words: vec![0; word_count(len)],
        })
    }

    pub fn ones(len: usize) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        s.words.iter_mut().for_each(|w| *w = !0);
        s.clear_tail();
        Ok(s)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let mut s = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        Ok(s)
    }

    /// Builds a string from raw words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Result<Self> {
        if len == 0 {
            return Err(invalid("bit string length must be at least 1"));
        }
        if words.len() != word_count(len) {
            return Err(invalid(format!(
                "{} words supplied for length {len}",
                words.len()
            )));
        }
        words.shrink_to_fit();
        let mut s = Self { len, words };
        s.clear_tail();
        Ok(s)
    }

    /// The low `len` bits of `value`, bit 0 first.
    pub fn from_u64(len: usize, value: u64) -> Result<Self> {
        if len > 64 {
            return Err(invalid("from_u64 supports at most 64 bits"));
        }
        Self::from_words(len, vec![value])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> Self {
        let mut out = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_tail();
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits in increasing order.
    pub fn ones_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    /// Distance without the length check. Callers guarantee equal lengths.
    #[inline]
    pub(crate) fn distance_unchecked(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Hex rows used by the code and fixture formats: nibble `k` holds bits
    /// `4k..4k+4` with bit `4k` as its most significant bit; the final nibble
    /// is zero padded.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for k in 0..self.len.div_ceil(4) {
            let mut nibble = 0u8;
            for j in 0..4 {
                let i = 4 * k + j;
                nibble <<= 1;
                if i < self.len && self.get(i) {
                    nibble |= 1;
                }
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let hex = hex.trim();
        if hex.len() != len.div_ceil(4) {
            return Err(GhdError::Parse(format!(
                "expected {} hex digits for length {len}, got {}",
                len.div_ceil(4),
                hex.len()
            )));
        }
        let mut s = Self::zeros(len)?;
        for (k, c) in hex.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| GhdError::Parse(format!("bad hex digit {c:?}")))?;
            for j in 0..4 {
                let bit = (nibble >> (3 - j)) & 1 == 1;
                let i = 4 * k + j;
                if i < len {
                    s.set(i, bit);
                } else if bit {
                    return Err(GhdError::Parse("nonzero padding bits".into()));
                }
            }
        }
        Ok(s)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Number of positions where `x` and `y` differ.
pub fn hamming_distance(x: &BitString, y: &BitString) -> Result<usize> {
    if x.len != y.len {
        return Err(GhdError::LengthMismatch {
            left: x.len,
            right: y.len,
        });
    }
    Ok(x.distance_unchecked(y))
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = GhdError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(GhdError::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits)
    }
}
