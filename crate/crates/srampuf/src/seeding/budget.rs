//! SRAM-length budgeting for seed and key generation.
//!
//! The secure-seed budget follows the leftover hash lemma: to end up with
//! `target` bits of entropy at slack `epsilon = 2^-e`, hash at least
//! `(target + e) / h` source bits, where `h` is the per-bit min-entropy of
//! the source. Bits round down; bytes round half-down, which is the
//! convention that yields the committed pairs 7314/914 and 457/57.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SeedBudget {
    pub target_entropy_bits: u32,
    pub min_entropy_per_bit: f64,
    /// Security slack exponent: epsilon = 2^-exponent, 0 disables the term.
    pub epsilon_exponent: u32,
    pub required_bits: u64,
    pub required_bytes: u64,
}

/// Guards against quotients like 99.999999999 that are meant to be exact.
const QUOTIENT_EPS: f64 = 1e-9;

pub fn seed_budget(
    target_entropy_bits: u32,
    min_entropy_per_bit: f64,
    epsilon_exponent: u32,
) -> Result<SeedBudget> {
    if !(min_entropy_per_bit > 0.0 && min_entropy_per_bit <= 1.0) {
        return Err(Error::Config(format!(
            "min-entropy rate {min_entropy_per_bit} outside (0, 1]"
        )));
    }
    let quotient =
        (target_entropy_bits as f64 + epsilon_exponent as f64) / min_entropy_per_bit;
    let required_bits = (quotient + QUOTIENT_EPS).floor() as u64;
    // round half-down: 914.25 -> 914, 57.125 -> 57, 1.5 -> 1
    let required_bytes = (required_bits + 3) / 8;
    Ok(SeedBudget {
        target_entropy_bits,
        min_entropy_per_bit,
        epsilon_exponent,
        required_bits,
        required_bytes,
    })
}

/// SRAM bits a naive key generator needs: `ceil(target / rate)`.
pub fn naive_key_budget(target_bits: u32, inter_device_min_entropy: f64) -> Result<u64> {
    if !(inter_device_min_entropy > 0.0 && inter_device_min_entropy <= 1.0) {
        return Err(Error::Config(format!(
            "min-entropy rate {inter_device_min_entropy} outside (0, 1]"
        )));
    }
    Ok((target_bits as f64 / inter_device_min_entropy - QUOTIENT_EPS).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secure_seed_budget_pair() {
        let b = seed_budget(256, 0.07, 256).unwrap();
        assert_eq!(b.required_bits, 7314);
        assert_eq!(b.required_bytes, 914);
    }

    #[test]
    fn simple_seed_budget_pair() {
        let b = seed_budget(32, 0.07, 0).unwrap();
        assert_eq!(b.required_bits, 457);
        assert_eq!(b.required_bytes, 57);
    }

    #[test]
    fn full_entropy_source() {
        let b = seed_budget(128, 1.0, 0).unwrap();
        assert_eq!(b.required_bits, 128);
        assert_eq!(b.required_bytes, 16);
    }

    #[test]
    fn naive_key_budget_values() {
        assert_eq!(naive_key_budget(128, 0.75).unwrap(), 171);
        assert_eq!(naive_key_budget(128, 1.0).unwrap(), 128);
        assert_eq!(naive_key_budget(12, 0.75).unwrap(), 16);
    }

    #[test]
    fn nonpositive_rate_rejected() {
        assert!(seed_budget(32, 0.0, 0).is_err());
        assert!(seed_budget(32, -0.1, 0).is_err());
        assert!(seed_budget(32, 1.5, 0).is_err());
        assert!(naive_key_budget(128, 0.0).is_err());
    }

    #[test]
    fn budget_monotonicity() {
        let bits = |t, h, e| seed_budget(t, h, e).unwrap().required_bits;
        // nonincreasing in rate
        assert!(bits(256, 0.07, 256) >= bits(256, 0.08, 256));
        assert!(bits(256, 0.5, 0) >= bits(256, 1.0, 0));
        // nondecreasing in target and epsilon exponent
        assert!(bits(257, 0.07, 256) >= bits(256, 0.07, 256));
        assert!(bits(256, 0.07, 257) >= bits(256, 0.07, 256));
    }
}
