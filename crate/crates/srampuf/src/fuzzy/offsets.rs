//! Sources of random code offsets for enrollment.

use std::collections::VecDeque;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::BitVec;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("offset source exhausted")]
pub struct OffsetsExhausted;

/// Yields the random code offsets consumed at enrollment.
pub trait OffsetSource {
    fn next_offset(&mut self, bits: usize) -> Result<BitVec, OffsetsExhausted>;
}

/// Fixed offsets for tests and reproducible enrollments; errors once the
/// queue runs dry.
#[derive(Debug, Default)]
pub struct FixedOffsets {
    queue: VecDeque<BitVec>,
}

impl FixedOffsets {
    pub fn new(offsets: impl IntoIterator<Item = BitVec>) -> Self {
        FixedOffsets {
            queue: offsets.into_iter().collect(),
        }
    }
}

impl OffsetSource for FixedOffsets {
    fn next_offset(&mut self, bits: usize) -> Result<BitVec, OffsetsExhausted> {
        let v = self.queue.pop_front().ok_or(OffsetsExhausted)?;
        assert_eq!(v.len(), bits, "fixed offset has wrong length");
        Ok(v)
    }
}

/// Deterministic expandable stream in the style of a hash-based PRNG:
/// block `i` is SHA-256(state ‖ i as 8-byte little-endian). Seeded from a
/// secure seed in deployment, or from recorded run randomness in the CLI.
#[derive(Debug, Clone)]
pub struct HashStreamOffsets {
    state: [u8; 32],
    counter: u64,
}

impl HashStreamOffsets {
    pub fn new(state: [u8; 32]) -> Self {
        HashStreamOffsets { state, counter: 0 }
    }

    /// Convenience seeding from a 64-bit value (stretched by hashing).
    pub fn from_seed(seed: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"offset-stream");
        h.update(seed.to_le_bytes());
        Self::new(h.finalize().into())
    }
}

impl OffsetSource for HashStreamOffsets {
    fn next_offset(&mut self, bits: usize) -> Result<BitVec, OffsetsExhausted> {
        let mut bytes = Vec::with_capacity(bits.div_ceil(8));
        while bytes.len() * 8 < bits {
            let mut h = Sha256::new();
            h.update(self.state);
            h.update(self.counter.to_le_bytes());
            self.counter += 1;
            bytes.extend_from_slice(&h.finalize());
        }
        bytes.truncate(bits.div_ceil(8));
        Ok(BitVec::from_bits(bytes, bits))
    }
}
