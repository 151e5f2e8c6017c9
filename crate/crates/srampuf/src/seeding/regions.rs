//! Memory-region planning for the seed and key generators.
//!
//! Regions are carved successively from a start address (default: the
//! middle of memory), skipping configured exclusion zones such as the
//! block the bootloader initializes. The simple seed comes last: its DEK
//! compression is invertible, so secure consumers must never share or
//! follow into its input region.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Region {
    pub offset_bits: u64,
    pub len_bits: u64,
}

impl Region {
    pub fn new(offset_bits: u64, len_bits: u64) -> Self {
        Region {
            offset_bits,
            len_bits,
        }
    }

    pub fn end_bits(&self) -> u64 {
        self.offset_bits + self.len_bits
    }

    pub fn overlaps(&self, other: &Region) -> bool {
        self.offset_bits < other.end_bits() && other.offset_bits < self.end_bits()
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RegionPlan {
    pub marker_region: Region,
    pub secure_seed_region: Region,
    pub key_region: Region,
    pub simple_seed_region: Region,
}

impl RegionPlan {
    pub fn regions(&self) -> [(&'static str, Region); 4] {
        [
            ("marker", self.marker_region),
            ("secure_seed", self.secure_seed_region),
            ("key", self.key_region),
            ("simple_seed", self.simple_seed_region),
        ]
    }

    /// Constraint check used both by the planner and by tests: pairwise
    /// disjoint, inside memory, clear of exclusions, and the simple-seed
    /// region strictly after the secure-seed and key regions.
    pub fn validate(&self, total_bits: u64, exclusions: &[Region]) -> Result<()> {
        let rs = self.regions();
        for (name, r) in &rs {
            if r.end_bits() > total_bits {
                return Err(Error::Config(format!("{name} region exceeds memory")));
            }
            for ex in exclusions {
                if r.overlaps(ex) {
                    return Err(Error::Config(format!("{name} region overlaps exclusion")));
                }
            }
        }
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                if rs[i].1.overlaps(&rs[j].1) {
                    return Err(Error::Config(format!(
                        "{} and {} regions overlap",
                        rs[i].0, rs[j].0
                    )));
                }
            }
        }
        if self.simple_seed_region.offset_bits < self.secure_seed_region.end_bits()
            || self.simple_seed_region.offset_bits < self.key_region.end_bits()
        {
            return Err(Error::Config(
                "simple-seed region must follow secure-seed and key regions".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PlannerConfig {
    /// First bit considered; `None` means the middle of memory.
    pub start_bits: Option<u64>,
    /// Zones the plan must avoid. Defaults to the 1 KiB block at 4 KiB
    /// that the bootloader initializes.
    pub exclusions: Vec<Region>,
    pub marker_bits: u64,
    pub secure_seed_bits: u64,
    pub simple_seed_bits: u64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            start_bits: None,
            exclusions: vec![Region::new(4096 * 8, 1024 * 8)],
            marker_bits: 32,
            secure_seed_bits: 1024 * 8,
            simple_seed_bits: 128 * 8,
        }
    }
}

/// Plans disjoint regions for the marker, secure seed, key material of
/// `key_len_bits`, and simple seed, in that order.
pub fn plan_regions(
    total_bits: u64,
    cfg: &PlannerConfig,
    key_len_bits: u64,
) -> Result<RegionPlan> {
    let start = cfg.start_bits.unwrap_or(total_bits / 2);
    if start >= total_bits {
        return Err(Error::Config(format!(
            "start bit {start} outside memory of {total_bits} bits"
        )));
    }
    for ex in &cfg.exclusions {
        if ex.end_bits() > total_bits {
            return Err(Error::Config("exclusion region exceeds memory".into()));
        }
    }

    let mut cursor = start;
    let mut carve = |len: u64| -> Result<Region> {
        loop {
            let candidate = Region::new(cursor, len);
            if candidate.end_bits() > total_bits {
                return Err(Error::Config(format!(
                    "insufficient memory: need {len} bits at offset {cursor} of {total_bits}"
                )));
            }
            match cfg.exclusions.iter().find(|ex| candidate.overlaps(ex)) {
                Some(ex) => cursor = ex.end_bits(),
                None => {
                    cursor = candidate.end_bits();
                    return Ok(candidate);
                }
            }
        }
    };

    let plan = RegionPlan {
        marker_region: carve(cfg.marker_bits)?,
        secure_seed_region: carve(cfg.secure_seed_bits)?,
        key_region: carve(key_len_bits)?,
        simple_seed_region: carve(cfg.simple_seed_bits)?,
    };
    plan.validate(total_bits, &cfg.exclusions)?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    const KIB64: u64 = 64 * 1024 * 8;

    #[test]
    fn default_plan_on_64_kib_is_valid() {
        let cfg = PlannerConfig::default();
        let plan = plan_regions(KIB64, &cfg, 1920).unwrap();
        plan.validate(KIB64, &cfg.exclusions).unwrap();
        assert_eq!(plan.marker_region.offset_bits, KIB64 / 2);
    }

    #[test]
    fn plan_skips_the_bootloader_block() {
        let cfg = PlannerConfig {
            start_bits: Some(30_000),
            ..PlannerConfig::default()
        };
        let plan = plan_regions(KIB64, &cfg, 1920).unwrap();
        plan.validate(KIB64, &cfg.exclusions).unwrap();
        // the secure seed would straddle the 4 KiB bootloader block if
        // carved naively, so it lands past the exclusion at 5 KiB
        assert_eq!(plan.secure_seed_region.offset_bits, 5120 * 8);
    }

    #[test]
    fn insufficient_memory_is_an_error() {
        let cfg = PlannerConfig {
            start_bits: Some(0),
            exclusions: vec![],
            ..PlannerConfig::default()
        };
        assert!(plan_regions(2048, &cfg, 1920).is_err());
    }

    #[test]
    fn validate_rejects_overlap() {
        let r = Region::new(0, 64);
        let plan = RegionPlan {
            marker_region: r,
            secure_seed_region: Region::new(32, 64),
            key_region: Region::new(128, 64),
            simple_seed_region: Region::new(256, 64),
        };
        assert!(plan.validate(1024, &[]).is_err());
    }

    #[test]
    fn validate_rejects_simple_seed_before_secure() {
        let plan = RegionPlan {
            marker_region: Region::new(0, 32),
            secure_seed_region: Region::new(512, 128),
            key_region: Region::new(640, 128),
            simple_seed_region: Region::new(64, 128),
        };
        assert!(plan.validate(1024, &[]).is_err());
    }
}
