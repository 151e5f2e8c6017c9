//! Configuration sweep over offset lengths and repetition counts.

use crate::ecc::Repetition;
use crate::error::Result;
use crate::fuzzy::{FuzzyConfig, HashId};

use super::failure::analytic_failure_rate;
use super::leakage::{remaining_entropy, BiasSpec, LeakageMode};

/// Offsets whose bit length divides into Golay blocks.
pub const OFFSET_BYTES: [u8; 6] = [9, 12, 15, 18, 21, 24];
pub const REPETITIONS: [u8; 7] = [1, 3, 5, 7, 9, 11, 13];

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ExtractorAssessment {
    pub offset_len_bytes: u8,
    pub repetitions: u8,
    pub sram_bits: u64,
    /// Decomposed-mode remaining entropy at the given bias.
    pub remaining_entropy_bits: f64,
    /// I.i.d. worst-case model; an upper bound for heterogeneous cells.
    pub analytic_failure_rate: f64,
}

/// One row per (offset, repetitions) pair at the given bias and worst-case
/// bit error rate.
pub fn assess_grid(bias: &BiasSpec, p_e: f64) -> Result<Vec<ExtractorAssessment>> {
    let mut rows = Vec::with_capacity(OFFSET_BYTES.len() * REPETITIONS.len());
    for &offset in &OFFSET_BYTES {
        for &r in &REPETITIONS {
            let config = FuzzyConfig::new(
                offset,
                Repetition::new(r).expect("grid repetitions are odd"),
                HashId::Sha256,
                0,
            )
            .expect("grid offsets are valid");
            rows.push(ExtractorAssessment {
                offset_len_bytes: offset,
                repetitions: r,
                sram_bits: config.sram_len_bits(),
                remaining_entropy_bits: remaining_entropy(
                    &config,
                    bias,
                    LeakageMode::Decomposed,
                )?,
                analytic_failure_rate: analytic_failure_rate(p_e, &config)?,
            });
        }
    }
    Ok(rows)
}
