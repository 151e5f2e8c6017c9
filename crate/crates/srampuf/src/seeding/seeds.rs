//! Simple and secure seed extraction from SRAM segments.

use sha2::{Digest, Sha256};

use super::budget::seed_budget;
use crate::error::{Error, Result};

/// Knuth's DEK iteration over the input bytes, 32-bit wraparound.
///
/// The state starts at the input length; each byte applies
/// `h = ((h << 5) ^ (h >> 27)) ^ b`. These constants are normative for
/// this crate and pinned by a golden vector test.
pub fn dek_hash(bytes: &[u8]) -> Result<u32> {
    if bytes.is_empty() {
        return Err(Error::Data("dek_hash of empty input".into()));
    }
    let mut h = bytes.len() as u32;
    for &b in bytes {
        h = ((h << 5) ^ (h >> 27)) ^ b as u32;
    }
    Ok(h)
}

/// Seed-length policy: per-bit min-entropy of the source plus the entropy
/// targets for each generator. Segment lengths are checked against the
/// derived budgets, not against the (larger) default regions.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SeedConfig {
    pub min_entropy_per_bit: f64,
    pub simple_target_bits: u32,
    pub secure_target_bits: u32,
    pub secure_epsilon_exponent: u32,
}

impl Default for SeedConfig {
    fn default() -> Self {
        SeedConfig {
            min_entropy_per_bit: 0.07,
            simple_target_bits: 32,
            secure_target_bits: 256,
            secure_epsilon_exponent: 256,
        }
    }
}

impl SeedConfig {
    pub fn simple_min_bytes(&self) -> Result<u64> {
        Ok(seed_budget(self.simple_target_bits, self.min_entropy_per_bit, 0)?.required_bytes)
    }

    pub fn secure_min_bytes(&self) -> Result<u64> {
        Ok(seed_budget(
            self.secure_target_bits,
            self.min_entropy_per_bit,
            self.secure_epsilon_exponent,
        )?
        .required_bytes)
    }
}

/// 32-bit general-purpose seed: DEK hash over the segment.
///
/// The DEK compression is invertible, so this seed leaks its input; the
/// region planner keeps secure consumers off the segment it reads.
pub fn simple_seed(segment: &[u8], cfg: &SeedConfig) -> Result<u32> {
    let need = cfg.simple_min_bytes()?;
    if (segment.len() as u64) < need {
        return Err(Error::Data(format!(
            "segment of {} bytes is below the {need}-byte simple-seed budget",
            segment.len()
        )));
    }
    dek_hash(segment)
}

/// 32-byte secure seed: SHA-256 over the segment.
pub fn secure_seed(segment: &[u8], cfg: &SeedConfig) -> Result<[u8; 32]> {
    let need = cfg.secure_min_bytes()?;
    if (segment.len() as u64) < need {
        return Err(Error::Data(format!(
            "segment of {} bytes is below the {need}-byte secure-seed budget",
            segment.len()
        )));
    }
    Ok(Sha256::digest(segment).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dek_rejects_empty_input() {
        assert!(dek_hash(&[]).is_err());
    }

    /// Golden vector: one zero byte, state initialized to length 1.
    #[test]
    fn dek_golden_single_zero_byte() {
        assert_eq!(dek_hash(&[0x00]).unwrap(), 32);
    }

    #[test]
    fn dek_is_deterministic() {
        let data = b"uninitialized sram";
        assert_eq!(dek_hash(data).unwrap(), dek_hash(data).unwrap());
    }

    #[test]
    fn simple_seed_budget_gate() {
        let cfg = SeedConfig::default();
        assert_eq!(cfg.simple_min_bytes().unwrap(), 57);
        assert!(simple_seed(&[0u8; 56], &cfg).is_err());
        assert!(simple_seed(&[0u8; 57], &cfg).is_ok());
        assert!(simple_seed(&[0u8; 128], &cfg).is_ok());
    }

    #[test]
    fn secure_seed_budget_gate_and_determinism() {
        let cfg = SeedConfig::default();
        assert_eq!(cfg.secure_min_bytes().unwrap(), 914);
        assert!(secure_seed(&[0u8; 913], &cfg).is_err());
        let a = secure_seed(&[7u8; 1024], &cfg).unwrap();
        let b = secure_seed(&[7u8; 1024], &cfg).unwrap();
        assert_eq!(a, b);
        let mut flipped = [7u8; 1024];
        flipped[100] ^= 1;
        assert_ne!(a, secure_seed(&flipped, &cfg).unwrap());
    }
}
