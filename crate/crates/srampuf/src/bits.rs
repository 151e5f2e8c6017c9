//! Bit vectors with the crate-wide LSB-first layout.
//!
//! Bit `i` of a vector lives in bit `i % 8` of byte `i / 8`. Every module
//! (dump files, helper-data payloads, code words) indexes bits this way, so
//! a byte dump and its bit view never disagree.

use std::fmt;

/// Growable bit vector, LSB-first within each byte.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    bytes: Vec<u8>,
    len: usize,
}

impl BitVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// All-zero vector of `len` bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            bytes: vec![0u8; len.div_ceil(8)],
            len,
        }
    }

    /// Takes ownership of raw bytes; every bit of every byte is part of the vector.
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let len = bytes.len() * 8;
        Self { bytes, len }
    }

    /// Interprets the low `len` bits of `bytes`. Excess bits in the final
    /// byte must be zero so equal vectors have equal byte forms.
    pub fn from_bits(bytes: Vec<u8>, len: usize) -> Self {
        assert!(len <= bytes.len() * 8, "len exceeds provided bytes");
        let mut v = Self {
            bytes,
            len,
        };
        v.bytes.truncate(len.div_ceil(8));
        v.mask_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.bytes[i / 8] >> (i % 8)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u8 << (i % 8);
        if value {
            self.bytes[i / 8] |= mask;
        } else {
            self.bytes[i / 8] &= !mask;
        }
    }

    pub fn push(&mut self, value: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// In-place XOR; lengths must match.
    pub fn xor_with(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        for (a, b) in self.bytes.iter_mut().zip(&other.bytes) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_with(other);
        out
    }

    /// Number of positions where both vectors are one; lengths must match.
    pub fn count_and(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "count_and of unequal lengths");
        self.bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Hamming distance to `other`; lengths must match.
    pub fn distance(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "distance of unequal lengths");
        self.bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Copies bits `[start, start + len)` into a fresh vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(
            start + len <= self.len,
            "slice [{start}, {}) out of range {}",
            start + len,
            self.len
        );
        if start % 8 == 0 {
            let first = start / 8;
            let bytes = self.bytes[first..first + len.div_ceil(8)].to_vec();
            return BitVec::from_bits(bytes, len);
        }
        let mut out = BitVec::zeros(len);
        let shift = start % 8;
        let first = start / 8;
        for (i, byte) in out.bytes.iter_mut().enumerate() {
            let lo = self.bytes[first + i] >> shift;
            let hi_idx = first + i + 1;
            let hi = if hi_idx < self.bytes.len() {
                self.bytes[hi_idx] << (8 - shift)
            } else {
                0
            };
            *byte = lo | hi;
        }
        out.mask_tail();
        out
    }

    /// Writes `src` over bits `[start, start + src.len())`.
    pub fn splice(&mut self, start: usize, src: &BitVec) {
        assert!(start + src.len() <= self.len, "splice out of range");
        for i in 0..src.len() {
            self.set(start + i, src.get(i));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bytes.iter().enumerate().flat_map(move |(bi, &b)| {
            let base = bi * 8;
            let len = self.len;
            (0..8).filter_map(move |j| {
                if (b >> j) & 1 == 1 && base + j < len {
                    Some(base + j)
                } else {
                    None
                }
            })
        })
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 8;
        if rem != 0 {
            if let Some(last) = self.bytes.last_mut() {
                *last &= (1u8 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}; ", self.len)?;
        for i in 0..self.len.min(64) {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        if self.len > 64 {
            write!(f, "…")?;
        }
        write!(f, "]")
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let mut v = BitVec::new();
        for b in iter {
            v.push(b);
        }
        v
    }
}

/// Fraction of differing bits. Panics on unequal lengths (callers validate).
pub fn fractional_distance(a: &BitVec, b: &BitVec) -> f64 {
    a.distance(b) as f64 / a.len() as f64
}
