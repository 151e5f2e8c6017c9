//! Implementations behind the `srampuf` binary. The binary itself only
//! parses flags and maps errors to exit codes; everything here is plain
//! library code so tests can drive it directly.
//!
//! Exit-code contract: 0 success, 1 usage or configuration error, 2 data
//! error (unreadable dumps, corrupt helper artifacts), 3 reconstruction
//! failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::RngCore;
use thiserror::Error;

use crate::analysis::{
    assess_grid, bit_alias, correlation_matrix, empirical_min_entropy, estimator_std_error,
    expected_estimator, hamming_weight_blocks, inter_stats, intra_stats, BiasSpec,
};
use crate::bits::BitVec;
use crate::ecc::Repetition;
use crate::error::Error;
use crate::fuzzy::{
    enroll_external, reconstruct, render_c_array, FixedOffsets, FuzzyConfig, HashId,
    HashStreamOffsets, HelperData, OffsetSource, ReconstructError,
};
use crate::manifest::{RunManifest, MANIFEST_FILE};
use crate::report;
use crate::seeding::{
    naive_key_budget, plan_regions, secure_seed, seed_budget, simple_seed, PlannerConfig,
    SeedConfig,
};
use crate::sram::{
    apply_aging, export_dumps, group_by_device, ingest_dumps, new_population, write_ground_truth,
    AgingProfile, PopulationConfig, SramReadout,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Config(_)) => 1,
            CliError::Lib(_) => 2,
            CliError::Reconstruction(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Simulation input file: a population plus an optional aging profile.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SimulateConfig {
    pub population: PopulationConfig,
    #[serde(default)]
    pub aging: Option<AgingProfile>,
}

#[derive(Debug, Clone)]
pub struct SimulateOpts {
    pub config: Option<PathBuf>,
    pub devices: Option<u32>,
    pub bits: Option<u32>,
    pub readouts: u32,
    pub aging: bool,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

/// Draws from the platform entropy source when no seed is given; the
/// drawn value lands in the manifest so the run stays reproducible.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| rand::rngs::OsRng.next_u64())
}

pub fn cmd_simulate(opts: &SimulateOpts) -> CliResult<()> {
    let started = Instant::now();
    let mut config = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            toml::from_str::<SimulateConfig>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => SimulateConfig {
            population: PopulationConfig::paper_calibration(),
            aging: None,
        },
    };
    if let Some(d) = opts.devices {
        config.population.n_devices = d;
    }
    if let Some(b) = opts.bits {
        config.population.n_bits = b;
    }
    if opts.aging && config.aging.is_none() {
        config.aging = Some(AgingProfile::paper_profile());
    }
    let seed = resolve_seed(opts.seed);

    let mut pop = new_population(&config.population, seed)?;
    if let Some(profile) = &config.aging {
        pop = apply_aging(&pop, profile)?;
    }

    let dumps = opts.out.join("dumps");
    fs::create_dir_all(&dumps).map_err(|e| Error::io(&dumps, e))?;
    export_dumps(&pop, opts.readouts, &dumps)?;
    let truth = opts.out.join("ground_truth.csv");
    write_ground_truth(&pop, &truth)?;

    let mut manifest = RunManifest::new(
        "simulate",
        serde_json::json!({
            "config": config,
            "readouts_per_device": opts.readouts,
        }),
        Some(seed),
    );
    manifest.outputs = vec![dumps, truth];
    manifest.wall_clock_ms = started.elapsed().as_millis();
    manifest.write(&opts.out.join(MANIFEST_FILE))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Alias,
    Weights,
    Distances,
    Entropy,
    Correlation,
    Convergence,
}

impl std::str::FromStr for ReportKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alias" => Ok(ReportKind::Alias),
            "weights" => Ok(ReportKind::Weights),
            "distances" => Ok(ReportKind::Distances),
            "entropy" => Ok(ReportKind::Entropy),
            "correlation" => Ok(ReportKind::Correlation),
            "convergence" => Ok(ReportKind::Convergence),
            other => Err(format!(
                "unknown report {other}; expected alias|weights|distances|entropy|correlation|convergence"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOpts {
    pub dumps: PathBuf,
    pub block_bytes: usize,
    pub reports: Vec<ReportKind>,
    pub corr_limit: usize,
    pub out: PathBuf,
}

/// First readout of every device, for inter-device metrics.
fn inter_set(devices: &std::collections::BTreeMap<u32, Vec<SramReadout>>) -> Vec<SramReadout> {
    devices.values().map(|rs| rs[0].clone()).collect()
}

/// Readouts of the device with the most snapshots, for intra-device
/// metrics.
fn intra_set(
    devices: &std::collections::BTreeMap<u32, Vec<SramReadout>>,
) -> Option<&Vec<SramReadout>> {
    devices
        .values()
        .filter(|rs| rs.len() >= 2)
        .max_by_key(|rs| rs.len())
}

pub fn cmd_analyze(opts: &AnalyzeOpts) -> CliResult<()> {
    let started = Instant::now();
    let readouts = ingest_dumps(&opts.dumps)?;
    let devices = group_by_device(readouts);
    fs::create_dir_all(&opts.out).map_err(|e| Error::io(&opts.out, e))?;
    let mut outputs: Vec<PathBuf> = Vec::new();
    let mut emit = |path: PathBuf| outputs.push(path);

    for kind in &opts.reports {
        match kind {
            ReportKind::Alias => {
                let inter = inter_set(&devices);
                let alias = bit_alias(&inter)?;
                let values = opts.out.join("alias_values.csv");
                let hist = opts.out.join("alias_histogram.csv");
                report::write_alias_values(&values, &alias)?;
                report::write_alias_histogram(&hist, &alias, 50)?;
                emit(values);
                emit(hist);
            }
            ReportKind::Weights => {
                let inter = inter_set(&devices);
                let per_device: Vec<(u32, f64)> = inter
                    .iter()
                    .map(|r| {
                        (
                            r.device_id,
                            r.bits.count_ones() as f64 / r.length_bits() as f64,
                        )
                    })
                    .collect();
                let device_path = opts.out.join("device_weights.csv");
                report::write_device_weights(&device_path, &per_device)?;
                emit(device_path);

                let mut block_means: Vec<f64> = Vec::new();
                for r in &inter {
                    let blocks = hamming_weight_blocks(r, opts.block_bytes)?;
                    if block_means.is_empty() {
                        block_means = vec![0.0; blocks.len()];
                    }
                    for (acc, w) in block_means.iter_mut().zip(&blocks) {
                        *acc += w;
                    }
                }
                for b in &mut block_means {
                    *b /= inter.len() as f64;
                }
                let block_path = opts.out.join("block_weights.csv");
                report::write_block_weights(&block_path, &block_means)?;
                emit(block_path);
            }
            ReportKind::Distances | ReportKind::Entropy => {
                let prefix = if *kind == ReportKind::Distances {
                    "distances"
                } else {
                    "entropy"
                };
                let mut wrote = false;
                if devices.len() >= 2 {
                    let inter = inter_set(&devices);
                    let rep = inter_stats(&inter, opts.block_bytes)?;
                    let path = opts.out.join(format!("{prefix}_inter.csv"));
                    report::write_entropy_report(&path, &rep)?;
                    emit(path);
                    wrote = true;
                }
                if let Some(rs) = intra_set(&devices) {
                    let rep = intra_stats(rs, opts.block_bytes)?;
                    let path = opts.out.join(format!("{prefix}_intra.csv"));
                    report::write_entropy_report(&path, &rep)?;
                    emit(path);
                    wrote = true;
                }
                if !wrote {
                    return Err(Error::Data(
                        "need two devices or repeated readouts of one device".into(),
                    )
                    .into());
                }
            }
            ReportKind::Correlation => {
                let mut inter = inter_set(&devices);
                inter.truncate(opts.corr_limit);
                let ids: Vec<u32> = inter.iter().map(|r| r.device_id).collect();
                let matrix = correlation_matrix(&inter)?;
                let path = opts.out.join("correlation.csv");
                report::write_correlation(&path, &matrix, &ids)?;
                emit(path);
            }
            ReportKind::Convergence => {
                let inter = inter_set(&devices);
                if inter.len() < 2 {
                    return Err(
                        Error::Data("convergence needs at least two devices".into()).into()
                    );
                }
                let pooled_ones: usize = inter.iter().map(|r| r.bits.count_ones()).sum();
                let pooled_p1 = pooled_ones as f64
                    / (inter.len() * inter[0].length_bits()) as f64;
                let mut sizes: Vec<usize> = [10usize, 25, 50, 100, 200, 400]
                    .into_iter()
                    .filter(|&n| n < inter.len())
                    .collect();
                sizes.push(inter.len());
                let rows: Vec<report::ConvergenceRow> = sizes
                    .into_iter()
                    .map(|n| -> Result<report::ConvergenceRow, Error> {
                        let alias = bit_alias(&inter[..n])?;
                        let h_empirical = alias
                            .iter()
                            .map(|p| {
                                empirical_min_entropy((p * n as f64).round() as u64, n as u64)
                                    .expect("count in range")
                            })
                            .sum::<f64>()
                            / alias.len() as f64;
                        Ok(report::ConvergenceRow {
                            n,
                            h_empirical,
                            h_expected: expected_estimator(pooled_p1, n as u64)?,
                            std_error: estimator_std_error(n as u64)?,
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let path = opts.out.join("convergence.csv");
                report::write_convergence(&path, &rows)?;
                emit(path);
            }
        }
    }

    let mut manifest = RunManifest::new(
        "analyze",
        serde_json::json!({
            "dumps": opts.dumps,
            "block_bytes": opts.block_bytes,
            "reports": opts.reports.iter().map(|k| format!("{k:?}")).collect::<Vec<_>>(),
            "corr_limit": opts.corr_limit,
        }),
        None,
    );
    manifest.outputs = outputs;
    manifest.wall_clock_ms = started.elapsed().as_millis();
    manifest.write(&opts.out.join(MANIFEST_FILE))?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BudgetOpts {
    pub target: u32,
    pub hmin: f64,
    pub epsilon_exp: u32,
    pub naive_key: bool,
    pub json: bool,
}

pub fn cmd_budget(opts: &BudgetOpts, out: &mut impl std::io::Write) -> CliResult<()> {
    if opts.naive_key {
        let bits = naive_key_budget(opts.target, opts.hmin)?;
        if opts.json {
            let _ = writeln!(
                out,
                "{}",
                serde_json::json!({"target_bits": opts.target, "rate": opts.hmin, "required_bits": bits})
            );
        } else {
            let _ = writeln!(out, "{bits} bits");
        }
        return Ok(());
    }
    let budget = seed_budget(opts.target, opts.hmin, opts.epsilon_exp)?;
    if opts.json {
        let _ = writeln!(out, "{}", serde_json::to_string(&budget).unwrap());
    } else {
        let _ = writeln!(
            out,
            "{} bits / {} bytes",
            budget.required_bits, budget.required_bytes
        );
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct EnrollOpts {
    pub dump: PathBuf,
    pub offset_bytes: u8,
    pub reps: u8,
    pub sram_offset_bits: u64,
    pub out: PathBuf,
    pub emit_c: Option<PathBuf>,
    pub c_symbol: String,
    pub force: bool,
    pub seed: Option<u64>,
    pub offset_hex: Option<String>,
}

fn fuzzy_config(offset_bytes: u8, reps: u8, sram_offset_bits: u64) -> Result<FuzzyConfig, Error> {
    let reps = Repetition::new(reps).map_err(|e| Error::Config(e.to_string()))?;
    FuzzyConfig::new(offset_bytes, reps, HashId::Sha256, sram_offset_bits)
        .map_err(|e| Error::Config(e.to_string()))
}

pub fn cmd_enroll(opts: &EnrollOpts, out: &mut impl std::io::Write) -> CliResult<()> {
    let started = Instant::now();
    let config = fuzzy_config(opts.offset_bytes, opts.reps, opts.sram_offset_bits)?;

    let seed = resolve_seed(opts.seed);
    let mut fixed;
    let mut stream;
    let source: &mut dyn OffsetSource = match &opts.offset_hex {
        Some(hex_str) => {
            let bytes = hex::decode(hex_str)
                .map_err(|e| Error::Config(format!("offset hex: {e}")))?;
            if bytes.len() != opts.offset_bytes as usize {
                return Err(Error::Config(format!(
                    "offset hex is {} bytes, config needs {}",
                    bytes.len(),
                    opts.offset_bytes
                ))
                .into());
            }
            fixed = FixedOffsets::new([BitVec::from_bytes(bytes)]);
            &mut fixed
        }
        None => {
            stream = HashStreamOffsets::from_seed(seed);
            &mut stream
        }
    };

    let (helper, key) = enroll_external(&opts.dump, &config, source, &opts.out, opts.force)?;
    if let Some(c_path) = &opts.emit_c {
        let text = render_c_array(&helper, &opts.c_symbol);
        fs::write(c_path, text).map_err(|e| Error::io(c_path, e))?;
    }

    let mut manifest = RunManifest::new(
        "enroll",
        serde_json::json!({
            "dump": opts.dump,
            "offset_bytes": opts.offset_bytes,
            "repetitions": opts.reps,
            "sram_offset_bits": opts.sram_offset_bits,
            "offset_hex": opts.offset_hex,
            "remaining_entropy_bits": key.remaining_entropy_bits,
        }),
        Some(seed),
    );
    manifest.outputs = vec![opts.out.clone()];
    if let Some(c) = &opts.emit_c {
        manifest.outputs.push(c.clone());
    }
    manifest.wall_clock_ms = started.elapsed().as_millis();
    let manifest_path = opts.out.with_extension("manifest.json");
    manifest.write(&manifest_path)?;

    let _ = writeln!(out, "{}", key.hex());
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ReconstructOpts {
    pub dump: PathBuf,
    pub helper: PathBuf,
}

pub fn cmd_reconstruct(opts: &ReconstructOpts, out: &mut impl std::io::Write) -> CliResult<()> {
    let bytes = fs::read(&opts.helper).map_err(|e| Error::io(&opts.helper, e))?;
    let helper = HelperData::deserialize(&bytes)
        .map_err(|e| Error::Data(format!("{}: {e}", opts.helper.display())))?;
    let dump = fs::read(&opts.dump).map_err(|e| Error::io(&opts.dump, e))?;
    let readout = BitVec::from_bytes(dump);
    let segment = helper
        .config
        .segment_of(&readout)
        .map_err(|e| Error::Data(e.to_string()))?;
    match reconstruct(&segment, &helper) {
        Ok(key) => {
            let _ = writeln!(out, "{}", key.hex());
            Ok(())
        }
        Err(e @ ReconstructError::Uncorrectable { .. }) => {
            Err(CliError::Reconstruction(e.to_string()))
        }
        Err(e) => Err(Error::Data(e.to_string()).into()),
    }
}

#[derive(Debug, Clone)]
pub struct SeedOpts {
    pub dump: Option<PathBuf>,
    pub secure_offset_bytes: u64,
    pub secure_len_bytes: u64,
    pub simple_offset_bytes: u64,
    pub simple_len_bytes: u64,
    pub hmin: f64,
    pub plan_total_bits: Option<u64>,
    pub plan_start_bits: Option<u64>,
    pub plan_offset_bytes: u8,
    pub plan_reps: u8,
}

pub fn cmd_seed(opts: &SeedOpts, out: &mut impl std::io::Write) -> CliResult<()> {
    if let Some(total_bits) = opts.plan_total_bits {
        let fuzzy = fuzzy_config(opts.plan_offset_bytes, opts.plan_reps, 0)?;
        let planner = PlannerConfig {
            start_bits: opts.plan_start_bits,
            ..PlannerConfig::default()
        };
        let plan = plan_regions(total_bits, &planner, fuzzy.sram_len_bits())?;
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&plan).unwrap());
        return Ok(());
    }
    let Some(dump) = &opts.dump else {
        return Err(Error::Config("seed needs --dump or --plan-total-bits".into()).into());
    };
    let bytes = fs::read(dump).map_err(|e| Error::io(dump, e))?;
    let take = |offset: u64, len: u64, what: &str| -> Result<&[u8], Error> {
        let end = offset + len;
        if end as usize > bytes.len() {
            return Err(Error::Data(format!(
                "{what} segment [{offset}, {end}) outside dump of {} bytes",
                bytes.len()
            )));
        }
        Ok(&bytes[offset as usize..end as usize])
    };
    let cfg = SeedConfig {
        min_entropy_per_bit: opts.hmin,
        ..SeedConfig::default()
    };
    let secure = secure_seed(
        take(opts.secure_offset_bytes, opts.secure_len_bytes, "secure")?,
        &cfg,
    )?;
    let simple = simple_seed(
        take(opts.simple_offset_bytes, opts.simple_len_bytes, "simple")?,
        &cfg,
    )?;
    let _ = writeln!(
        out,
        "{}",
        serde_json::json!({
            "simple_seed": simple,
            "secure_seed": hex::encode(secure),
        })
    );
    Ok(())
}

#[derive(Debug, Clone)]
pub struct AssessOpts {
    pub bias: f64,
    pub p_e: f64,
    pub out: Option<PathBuf>,
}

pub fn cmd_assess(opts: &AssessOpts, out: &mut impl std::io::Write) -> CliResult<()> {
    let bias = BiasSpec::new(opts.bias)?;
    let rows = assess_grid(&bias, opts.p_e)?;
    match &opts.out {
        Some(path) => {
            report::write_grid(path, &rows)?;
        }
        None => {
            let _ = write!(out, "{}", report::grid_to_csv(&rows));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulate_config_toml_round_trips() {
        let cfg = SimulateConfig {
            population: PopulationConfig::paper_calibration(),
            aging: Some(AgingProfile::paper_profile()),
        };
        let text = toml::to_string(&cfg).unwrap();
        let back: SimulateConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.population, cfg.population);
        assert_eq!(back.aging, cfg.aging);
    }

    #[test]
    fn budget_prints_the_committed_pairs() {
        let mut buf = Vec::new();
        cmd_budget(
            &BudgetOpts {
                target: 256,
                hmin: 0.07,
                epsilon_exp: 256,
                naive_key: false,
                json: false,
            },
            &mut buf,
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "7314 bits / 914 bytes\n");

        let mut buf = Vec::new();
        cmd_budget(
            &BudgetOpts {
                target: 128,
                hmin: 0.75,
                epsilon_exp: 0,
                naive_key: true,
                json: false,
            },
            &mut buf,
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "171 bits\n");
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(CliError::Lib(Error::Config("x".into())).exit_code(), 1);
        assert_eq!(CliError::Lib(Error::Data("x".into())).exit_code(), 2);
        assert_eq!(CliError::Reconstruction("x".into()).exit_code(), 3);
    }
}
