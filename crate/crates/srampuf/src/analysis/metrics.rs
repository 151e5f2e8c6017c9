//! Population metrics: bit-alias, hamming weights and distances, Pearson
//! correlation, and blockwise entropy reports.

use rayon::prelude::*;

use crate::bits::{fractional_distance, BitVec};
use crate::error::{Error, Result};
use crate::sram::SramReadout;

use super::entropy::empirical_min_entropy;

/// Per bit position, the fraction of devices that power up as one.
/// Expects one readout per device.
pub fn bit_alias(readouts: &[SramReadout]) -> Result<Vec<f64>> {
    check_same_length(readouts, 2)?;
    let n = readouts.len() as f64;
    let counts = ones_counts(readouts.iter().map(|r| &r.bits));
    Ok(counts.into_iter().map(|c| c as f64 / n).collect())
}

/// Relative hamming weight of every `block_bytes` block.
pub fn hamming_weight_blocks(readout: &SramReadout, block_bytes: usize) -> Result<Vec<f64>> {
    let block_bits = block_bytes * 8;
    if block_bits == 0 || readout.length_bits() % block_bits != 0 {
        return Err(Error::Data(format!(
            "block size {block_bytes} B does not divide {} bits",
            readout.length_bits()
        )));
    }
    Ok((0..readout.length_bits() / block_bits)
        .map(|b| {
            let block = readout.bits.slice(b * block_bits, block_bits);
            block.count_ones() as f64 / block_bits as f64
        })
        .collect())
}

/// Fractional hamming distance between two equal-length readouts.
pub fn frac_hamming_distance(a: &SramReadout, b: &SramReadout) -> Result<f64> {
    if a.length_bits() != b.length_bits() {
        return Err(Error::Data(format!(
            "length mismatch: {} vs {} bits",
            a.length_bits(),
            b.length_bits()
        )));
    }
    Ok(fractional_distance(&a.bits, &b.bits))
}

/// Pearson correlation of the {0,1}-valued readout vectors.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub values: Vec<Vec<f64>>,
    /// Devices with constant readouts; their off-diagonal coefficients are
    /// defined as 0 instead of NaN.
    pub constant_devices: Vec<usize>,
}

pub fn correlation_matrix(readouts: &[SramReadout]) -> Result<CorrelationMatrix> {
    check_same_length(readouts, 2)?;
    let n = readouts[0].length_bits() as f64;
    let weights: Vec<f64> = readouts.iter().map(|r| r.bits.count_ones() as f64).collect();
    let constant_devices: Vec<usize> = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w == 0.0 || **w == n)
        .map(|(i, _)| i)
        .collect();

    let k = readouts.len();
    let mut values = vec![vec![0.0; k]; k];
    let rows: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; k];
            row[i] = 1.0;
            let var_i = weights[i] * (n - weights[i]);
            for j in i + 1..k {
                let var_j = weights[j] * (n - weights[j]);
                if var_i == 0.0 || var_j == 0.0 {
                    continue;
                }
                let both = readouts[i].bits.count_and(&readouts[j].bits) as f64;
                row[j] = (n * both - weights[i] * weights[j]) / (var_i * var_j).sqrt();
            }
            row
        })
        .collect();
    for (i, row) in rows.into_iter().enumerate() {
        for j in i..k {
            values[i][j] = row[j];
            values[j][i] = row[j];
        }
    }
    Ok(CorrelationMatrix {
        values,
        constant_devices,
    })
}

/// Five-number summary plus mean, quartiles by linear interpolation
/// (type-7).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DistanceStats {
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl DistanceStats {
    fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        DistanceStats {
            mean,
            min: samples[0],
            q1: percentile_type7(&samples, 0.25),
            median: percentile_type7(&samples, 0.5),
            q3: percentile_type7(&samples, 0.75),
            max: *samples.last().unwrap(),
        }
    }
}

/// Type-7 percentile of an ascending slice.
pub fn percentile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatsKind {
    /// Readouts of one device (noise).
    Intra,
    /// One readout per device (uniqueness).
    Inter,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BlockStats {
    pub block_index: usize,
    pub distance: DistanceStats,
    /// Mean over bit positions of the empirical min-entropy.
    pub min_entropy: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EntropyReport {
    pub kind: StatsKind,
    pub block_size_bytes: usize,
    pub per_block: Vec<BlockStats>,
    /// Pooled one-frequency over all positions and samples.
    pub p1_hat: f64,
    /// Averaged bitwise min-entropy over all positions.
    pub hmin_hat: f64,
}

/// Blockwise pairwise distances and min-entropies across readouts of one
/// device.
pub fn intra_stats(readouts: &[SramReadout], block_bytes: usize) -> Result<EntropyReport> {
    block_report(readouts, block_bytes, StatsKind::Intra)
}

/// Blockwise pairwise distances and min-entropies across devices (one
/// readout each).
pub fn inter_stats(readouts: &[SramReadout], block_bytes: usize) -> Result<EntropyReport> {
    block_report(readouts, block_bytes, StatsKind::Inter)
}

fn block_report(
    readouts: &[SramReadout],
    block_bytes: usize,
    kind: StatsKind,
) -> Result<EntropyReport> {
    check_same_length(readouts, 2)?;
    let total_bits = readouts[0].length_bits();
    let block_bits = block_bytes * 8;
    if block_bits == 0 || total_bits % block_bits != 0 {
        return Err(Error::Data(format!(
            "block size {block_bytes} B does not divide {total_bits} bits"
        )));
    }
    let n_blocks = total_bits / block_bits;
    let n = readouts.len();

    let per_block: Vec<BlockStats> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let blocks: Vec<BitVec> = readouts
                .iter()
                .map(|r| r.bits.slice(b * block_bits, block_bits))
                .collect();
            let mut dists = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    dists.push(fractional_distance(&blocks[i], &blocks[j]));
                }
            }
            let counts = ones_counts(blocks.iter());
            let hmin = counts
                .iter()
                .map(|&c| empirical_min_entropy(c as u64, n as u64).expect("count <= n"))
                .sum::<f64>()
                / block_bits as f64;
            BlockStats {
                block_index: b,
                distance: DistanceStats::from_samples(dists),
                min_entropy: hmin,
            }
        })
        .collect();

    let total_ones: usize = readouts.iter().map(|r| r.bits.count_ones()).sum();
    let p1_hat = total_ones as f64 / (total_bits * n) as f64;
    let hmin_hat =
        per_block.iter().map(|b| b.min_entropy).sum::<f64>() / per_block.len() as f64;
    Ok(EntropyReport {
        kind,
        block_size_bytes: block_bytes,
        per_block,
        p1_hat,
        hmin_hat,
    })
}

/// Worst-case per-bit flip rate of one device, measured against the first
/// readout as reference.
#[derive(Debug, Clone)]
pub struct MaxBitError {
    pub overall: f64,
    pub per_block: Vec<f64>,
}

pub fn max_bit_error(readouts: &[SramReadout], block_bytes: usize) -> Result<MaxBitError> {
    check_same_length(readouts, 2)?;
    let total_bits = readouts[0].length_bits();
    let block_bits = block_bytes * 8;
    if block_bits == 0 || total_bits % block_bits != 0 {
        return Err(Error::Data(format!(
            "block size {block_bytes} B does not divide {total_bits} bits"
        )));
    }
    let reference = &readouts[0].bits;
    let mut flip_counts = vec![0u32; total_bits];
    for r in &readouts[1..] {
        for i in r.bits.xor(reference).iter_ones() {
            flip_counts[i] += 1;
        }
    }
    let trials = (readouts.len() - 1) as f64;
    let per_block: Vec<f64> = flip_counts
        .chunks(block_bits)
        .map(|chunk| chunk.iter().copied().max().unwrap_or(0) as f64 / trials)
        .collect();
    let overall = per_block.iter().cloned().fold(0.0, f64::max);
    Ok(MaxBitError { overall, per_block })
}

fn ones_counts<'a>(bitvecs: impl Iterator<Item = &'a BitVec>) -> Vec<u32> {
    let mut counts: Vec<u32> = Vec::new();
    for v in bitvecs {
        if counts.is_empty() {
            counts = vec![0; v.len()];
        }
        for i in v.iter_ones() {
            counts[i] += 1;
        }
    }
    counts
}

fn check_same_length(readouts: &[SramReadout], minimum: usize) -> Result<()> {
    if readouts.len() < minimum {
        return Err(Error::Data(format!(
            "need at least {minimum} readouts, got {}",
            readouts.len()
        )));
    }
    let len = readouts[0].length_bits();
    if readouts.iter().any(|r| r.length_bits() != len) {
        return Err(Error::Data("readouts have mixed lengths".into()));
    }
    Ok(())
}
