//! CSV emitters. Every file starts with a schema comment line
//! `# srampuf-csv v1 <report>` so downstream tooling can detect drift.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::{CorrelationMatrix, EntropyReport, ExtractorAssessment, StatsKind};
use crate::error::{Error, Result};

fn write_file(path: &Path, contents: String) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn header(report: &str) -> String {
    format!("# srampuf-csv v1 {report}\n")
}

/// `position,p1`
pub fn write_alias_values(path: &Path, alias: &[f64]) -> Result<()> {
    let mut out = header("alias-values");
    out.push_str("position,p1\n");
    for (i, p) in alias.iter().enumerate() {
        let _ = writeln!(out, "{i},{p}");
    }
    write_file(path, out)
}

/// `bin_low,bin_high,count` over [0, 1].
pub fn write_alias_histogram(path: &Path, alias: &[f64], bins: usize) -> Result<()> {
    let counts = histogram(alias, bins);
    let mut out = header("alias-histogram");
    out.push_str("bin_low,bin_high,count\n");
    let w = 1.0 / bins as f64;
    for (i, c) in counts.iter().enumerate() {
        let _ = writeln!(out, "{},{},{c}", i as f64 * w, (i + 1) as f64 * w);
    }
    write_file(path, out)
}

pub fn histogram(values: &[f64], bins: usize) -> Vec<u32> {
    let mut counts = vec![0u32; bins];
    for &v in values {
        let idx = ((v * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
}

/// `device_id,mean_weight`
pub fn write_device_weights(path: &Path, rows: &[(u32, f64)]) -> Result<()> {
    let mut out = header("device-weights");
    out.push_str("device_id,mean_weight\n");
    for (id, w) in rows {
        let _ = writeln!(out, "{id},{w}");
    }
    write_file(path, out)
}

/// `block_index,mean_weight` averaged across devices.
pub fn write_block_weights(path: &Path, rows: &[f64]) -> Result<()> {
    let mut out = header("block-weights");
    out.push_str("block_index,mean_weight\n");
    for (i, w) in rows.iter().enumerate() {
        let _ = writeln!(out, "{i},{w}");
    }
    write_file(path, out)
}

/// `block_index,dist_mean,dist_min,dist_q1,dist_median,dist_q3,dist_max,min_entropy`
pub fn write_entropy_report(path: &Path, report: &EntropyReport) -> Result<()> {
    let name = match report.kind {
        StatsKind::Intra => "entropy-intra",
        StatsKind::Inter => "entropy-inter",
    };
    let mut out = header(name);
    let _ = writeln!(
        out,
        "# block_size_bytes={} p1_hat={} hmin_hat={}",
        report.block_size_bytes, report.p1_hat, report.hmin_hat
    );
    out.push_str("block_index,dist_mean,dist_min,dist_q1,dist_median,dist_q3,dist_max,min_entropy\n");
    for b in &report.per_block {
        let d = b.distance;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            b.block_index, d.mean, d.min, d.q1, d.median, d.q3, d.max, b.min_entropy
        );
    }
    write_file(path, out)
}

/// Square matrix with a device-id header row/column.
pub fn write_correlation(path: &Path, matrix: &CorrelationMatrix, ids: &[u32]) -> Result<()> {
    let mut out = header("correlation-matrix");
    if !matrix.constant_devices.is_empty() {
        let flagged: Vec<String> = matrix
            .constant_devices
            .iter()
            .map(|i| ids[*i].to_string())
            .collect();
        let _ = writeln!(out, "# constant_devices={}", flagged.join(";"));
    }
    out.push_str("device_id");
    for id in ids {
        let _ = write!(out, ",{id}");
    }
    out.push('\n');
    for (i, row) in matrix.values.iter().enumerate() {
        let _ = write!(out, "{}", ids[i]);
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    write_file(path, out)
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h_empirical: f64,
    pub h_expected: f64,
    pub std_error: f64,
}

/// `n,h_empirical,h_expected,std_error`
pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    let mut out = header("convergence");
    out.push_str("n,h_empirical,h_expected,std_error\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.n, r.h_empirical, r.h_expected, r.std_error);
    }
    write_file(path, out)
}

/// `offset_bytes,repetitions,sram_bits,remaining_entropy_bits,analytic_failure_rate`
pub fn grid_to_csv(rows: &[ExtractorAssessment]) -> String {
    let mut out = header("assessment-grid");
    out.push_str("offset_bytes,repetitions,sram_bits,remaining_entropy_bits,analytic_failure_rate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.offset_len_bytes,
            r.repetitions,
            r.sram_bits,
            r.remaining_entropy_bits,
            r.analytic_failure_rate
        );
    }
    out
}

pub fn write_grid(path: &Path, rows: &[ExtractorAssessment]) -> Result<()> {
    write_file(path, grid_to_csv(rows))
}
