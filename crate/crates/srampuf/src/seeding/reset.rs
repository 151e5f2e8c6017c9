//! Soft-reset detection and seed evolution.
//!
//! A marker word at a known address survives a soft reset but scrambles on
//! a real power-off. A boot is treated as cold when the marker mismatches
//! or the platform reports a wake from deep sleep (hardware overrides the
//! marker, which software could have forged). Across soft resets the
//! stored seed evolves by hashing, so earlier outputs cannot be recovered
//! from a later state.

use sha2::{Digest, Sha256};
use thiserror::Error;

pub const DEFAULT_MARKER: u32 = 0xAD5E_ED0F;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boot {
    ColdBoot,
    SoftReset,
}

/// Platform power-management report for the preceding state, when the
/// hardware supports one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmIndication {
    WokeFromDeepSleep,
    NoDeepSleep,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResetError {
    /// Soft reset with no stored seed: evolving would yield a
    /// zero-entropy value, so the caller must be told instead.
    #[error("soft reset without a stored seed would produce zero entropy")]
    ZeroEntropySoftReset,
    #[error("cold-boot evolution requires a fresh secure seed")]
    MissingFreshSeed,
}

/// Single-owner reset state machine; concurrent detection on one value is
/// the caller's bug to prevent.
#[derive(Debug, Clone)]
pub struct ResetState {
    pub marker_value: u32,
    pub marker_cell: u32,
    pub counter: u32,
    pub stored_seed: Option<[u8; 32]>,
    pub pm_indication: Option<PmIndication>,
}

impl ResetState {
    /// Fresh state with the marker cell holding arbitrary power-up content.
    pub fn new(marker_cell: u32) -> Self {
        ResetState {
            marker_value: DEFAULT_MARKER,
            marker_cell,
            counter: 0,
            stored_seed: None,
            pm_indication: None,
        }
    }

    /// Classifies the boot, then (re)writes the marker. A cold boot also
    /// resets the soft-reset counter.
    pub fn detect_reset(&mut self) -> Boot {
        let cold = self.marker_cell != self.marker_value
            || self.pm_indication == Some(PmIndication::WokeFromDeepSleep);
        self.marker_cell = self.marker_value;
        if cold {
            self.counter = 0;
            Boot::ColdBoot
        } else {
            Boot::SoftReset
        }
    }

    /// Evolves the stored seed for the given boot kind and returns the new
    /// value. Cold boots consume a fresh secure seed; soft resets append
    /// the incremented counter (4-byte little-endian) and re-hash.
    pub fn evolve_seed(
        &mut self,
        boot: Boot,
        fresh_secure_seed: Option<&[u8; 32]>,
    ) -> Result<[u8; 32], ResetError> {
        match boot {
            Boot::ColdBoot => {
                let fresh = fresh_secure_seed.ok_or(ResetError::MissingFreshSeed)?;
                self.counter = 0;
                let next: [u8; 32] = Sha256::digest(fresh).into();
                self.stored_seed = Some(next);
                Ok(next)
            }
            Boot::SoftReset => {
                let prev = self.stored_seed.ok_or(ResetError::ZeroEntropySoftReset)?;
                self.counter += 1;
                let mut h = Sha256::new();
                h.update(prev);
                h.update(self.counter.to_le_bytes());
                let next: [u8; 32] = h.finalize().into();
                self.stored_seed = Some(next);
                Ok(next)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn randomized_marker_means_cold_boot() {
        let mut s = ResetState::new(DEFAULT_MARKER ^ 0xFFFF);
        assert_eq!(s.detect_reset(), Boot::ColdBoot);
        // marker was rewritten, an immediate re-entry is a soft reset
        assert_eq!(s.detect_reset(), Boot::SoftReset);
    }

    #[test]
    fn deep_sleep_indication_overrides_matching_marker() {
        let mut s = ResetState::new(DEFAULT_MARKER);
        s.pm_indication = Some(PmIndication::WokeFromDeepSleep);
        assert_eq!(s.detect_reset(), Boot::ColdBoot);
        s.pm_indication = Some(PmIndication::NoDeepSleep);
        assert_eq!(s.detect_reset(), Boot::SoftReset);
    }

    #[test]
    fn consecutive_soft_resets_yield_distinct_seeds() {
        let mut s = ResetState::new(0);
        s.detect_reset();
        let fresh = [0x42u8; 32];
        let s0 = s.evolve_seed(Boot::ColdBoot, Some(&fresh)).unwrap();
        let s1 = s.evolve_seed(Boot::SoftReset, None).unwrap();
        let s2 = s.evolve_seed(Boot::SoftReset, None).unwrap();
        assert_ne!(s0, s1);
        assert_ne!(s1, s2);
        assert_eq!(s.counter, 2);
    }

    #[test]
    fn evolution_replays_exactly() {
        let fresh = [0x17u8; 32];
        let run = || {
            let mut s = ResetState::new(0);
            s.detect_reset();
            let mut out = vec![s.evolve_seed(Boot::ColdBoot, Some(&fresh)).unwrap()];
            for _ in 0..3 {
                out.push(s.evolve_seed(Boot::SoftReset, None).unwrap());
            }
            out
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn cold_boot_resets_counter() {
        let mut s = ResetState::new(0);
        let fresh = [1u8; 32];
        s.evolve_seed(Boot::ColdBoot, Some(&fresh)).unwrap();
        s.evolve_seed(Boot::SoftReset, None).unwrap();
        s.evolve_seed(Boot::SoftReset, None).unwrap();
        assert_eq!(s.counter, 2);
        s.evolve_seed(Boot::ColdBoot, Some(&fresh)).unwrap();
        assert_eq!(s.counter, 0);
    }

    #[test]
    fn soft_reset_without_seed_is_refused() {
        let mut s = ResetState::new(0);
        assert_eq!(
            s.evolve_seed(Boot::SoftReset, None),
            Err(ResetError::ZeroEntropySoftReset)
        );
    }
}
