//! Synthetic SRAM device populations.
//!
//! Each bit position carries a one-probability `theta` shared by the whole
//! population (inter-device bias) and each cell a per-readout flip
//! probability (intra-device noise). Device reference patterns are drawn
//! from the thetas, readouts flip pattern bits independently. Everything
//! is keyed by domain-separated streams of a single 64-bit seed, so a
//! (config, seed) pair regenerates bit-identically.

mod io;

pub use io::{export_dumps, group_by_device, ingest_dumps, write_ground_truth};

use rand::distributions::Distribution;
use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::Beta;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::seeding::Region;

/// Ground truth for one bit position: the population one-probability and
/// the per-readout flip probability of this cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellModel {
    pub theta: f64,
    pub flip_prob: f64,
}

/// Distribution of per-position one-probabilities.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThetaSpec {
    /// Every position has the same one-probability.
    Constant { value: f64 },
    /// Mixture of Beta components given by their modes and a shared
    /// concentration (alpha + beta). Concentration must exceed 2 so the
    /// modes are interior.
    BetaMixture {
        modes: Vec<f64>,
        weights: Vec<f64>,
        concentration: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NoiseTier {
    pub weight: f64,
    pub low: f64,
    pub high: f64,
}

/// Distribution of per-cell flip probabilities.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    Constant { value: f64 },
    /// Cells fall into tiers by weight; within a tier the flip probability
    /// is uniform in [low, high].
    Tiered { tiers: Vec<NoiseTier> },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PopulationConfig {
    pub n_devices: u32,
    /// Bits per device, a multiple of 8.
    pub n_bits: u32,
    pub theta: ThetaSpec,
    pub noise: NoiseSpec,
}

impl PopulationConfig {
    /// Calibration reproducing the measured field statistics at desk
    /// scale: bimodal bit-alias with modes near 0.4/0.6, inter-device
    /// distance about 0.48, per-block min-entropy about 0.75, intra-device
    /// distance about 0.06 with worst-cell flip rate 0.086.
    pub fn paper_calibration() -> Self {
        PopulationConfig {
            n_devices: 700,
            n_bits: 16 * 1024,
            theta: ThetaSpec::BetaMixture {
                modes: vec![0.4, 0.6],
                weights: vec![0.5, 0.5],
                concentration: 45.0,
            },
            noise: NoiseSpec::Tiered {
                tiers: vec![
                    NoiseTier {
                        weight: 0.318,
                        low: 0.0,
                        high: 0.005,
                    },
                    NoiseTier {
                        weight: 0.68,
                        low: 0.02,
                        high: 0.07,
                    },
                    NoiseTier {
                        weight: 0.002,
                        low: 0.078,
                        high: 0.086,
                    },
                ],
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_devices == 0 {
            return Err(Error::Config("n_devices must be at least 1".into()));
        }
        if self.n_bits < 8 || self.n_bits % 8 != 0 {
            return Err(Error::Config(format!(
                "n_bits {} must be a positive multiple of 8",
                self.n_bits
            )));
        }
        match &self.theta {
            ThetaSpec::Constant { value } => {
                if !(0.0..=1.0).contains(value) {
                    return Err(Error::Config(format!("theta {value} outside [0, 1]")));
                }
            }
            ThetaSpec::BetaMixture {
                modes,
                weights,
                concentration,
            } => {
                if modes.is_empty() || modes.len() != weights.len() {
                    return Err(Error::Config(
                        "theta mixture needs matching, non-empty modes and weights".into(),
                    ));
                }
                if modes.iter().any(|m| !(0.0..=1.0).contains(m)) {
                    return Err(Error::Config("theta mixture mode outside [0, 1]".into()));
                }
                if weights.iter().any(|w| *w < 0.0)
                    || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9
                {
                    return Err(Error::Config("theta mixture weights must sum to 1".into()));
                }
                if *concentration <= 2.0 {
                    return Err(Error::Config(
                        "theta mixture concentration must exceed 2".into(),
                    ));
                }
            }
        }
        match &self.noise {
            NoiseSpec::Constant { value } => {
                if !(0.0..=0.5).contains(value) {
                    return Err(Error::Config(format!(
                        "flip probability {value} outside [0, 0.5]"
                    )));
                }
            }
            NoiseSpec::Tiered { tiers } => {
                if tiers.is_empty() {
                    return Err(Error::Config("noise tiers must be non-empty".into()));
                }
                for t in tiers {
                    if !(0.0 <= t.low && t.low <= t.high && t.high <= 0.5) {
                        return Err(Error::Config(format!(
                            "noise tier [{}, {}] outside 0 <= low <= high <= 0.5",
                            t.low, t.high
                        )));
                    }
                    if t.weight < 0.0 {
                        return Err(Error::Config("noise tier weight negative".into()));
                    }
                }
                if (tiers.iter().map(|t| t.weight).sum::<f64>() - 1.0).abs() > 1e-9 {
                    return Err(Error::Config("noise tier weights must sum to 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Skew added to every position of an address range.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RegionSkew {
    pub region: Region,
    pub extra: f64,
}

/// Aging and wear model applied on top of a base population.
#[derive(Debug, Clone, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct AgingProfile {
    /// Target offset of the population mean hamming weight from 0.5.
    pub global_weight_shift: f64,
    pub wear_region: Option<RegionSkew>,
    pub bootloader_region: Option<RegionSkew>,
    /// Mean-weight gap between the heavy-use and light-use device halves.
    pub utilization_delta: f64,
}

impl AgingProfile {
    /// Natural real-world aging: +0.008 mean weight, heavy-use devices
    /// 0.0025 above light-use ones.
    pub fn paper_profile() -> Self {
        AgingProfile {
            global_weight_shift: 0.008,
            wear_region: None,
            bootloader_region: None,
            utilization_delta: 0.0025,
        }
    }
}

/// One power-up snapshot of a device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SramReadout {
    pub device_id: u32,
    pub readout_index: u32,
    pub bits: BitVec,
}

impl SramReadout {
    pub fn length_bits(&self) -> usize {
        self.bits.len()
    }
}

/// A generated population: ground-truth cell models plus materialized
/// reference patterns for every device.
#[derive(Debug, Clone)]
pub struct DevicePopulation {
    config: PopulationConfig,
    rng_seed: u64,
    thetas: Vec<f64>,
    flip_probs: Vec<f64>,
    /// Per-device additive theta skew (utilization aging); zero without a
    /// profile.
    device_skew: Vec<f64>,
    patterns: Vec<BitVec>,
    aging: Option<AgingProfile>,
}

impl DevicePopulation {
    pub fn n_devices(&self) -> u32 {
        self.config.n_devices
    }

    pub fn n_bits(&self) -> u32 {
        self.config.n_bits
    }

    pub fn config(&self) -> &PopulationConfig {
        &self.config
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn aging(&self) -> Option<&AgingProfile> {
        self.aging.as_ref()
    }

    pub fn cell(&self, position: usize) -> CellModel {
        CellModel {
            theta: self.thetas[position],
            flip_prob: self.flip_probs[position],
        }
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn flip_probs(&self) -> &[f64] {
        &self.flip_probs
    }

    pub fn pattern(&self, device_id: u32) -> Result<&BitVec> {
        self.patterns
            .get(device_id as usize)
            .ok_or_else(|| Error::Data(format!("unknown device id {device_id}")))
    }

    /// Devices in the upper half of the id range count as heavy use.
    pub fn is_heavy_use(&self, device_id: u32) -> bool {
        device_id >= self.config.n_devices / 2
    }
}

fn sample_thetas(config: &PopulationConfig, seed: u64) -> Result<Vec<f64>> {
    let mut rng = stream(seed, "theta", 0, 0);
    let n = config.n_bits as usize;
    match &config.theta {
        ThetaSpec::Constant { value } => Ok(vec![*value; n]),
        ThetaSpec::BetaMixture {
            modes,
            weights,
            concentration,
        } => {
            let components: Vec<Beta> = modes
                .iter()
                .map(|mode| {
                    let alpha = 1.0 + mode * (concentration - 2.0);
                    let beta = 1.0 + (1.0 - mode) * (concentration - 2.0);
                    Beta::new(alpha, beta).map_err(|e| Error::Config(e.to_string()))
                })
                .collect::<Result<_>>()?;
            let mut thetas = Vec::with_capacity(n);
            for _ in 0..n {
                let mut u: f64 = rng.gen();
                let mut idx = weights.len() - 1;
                for (k, w) in weights.iter().enumerate() {
                    if u < *w {
                        idx = k;
                        break;
                    }
                    u -= w;
                }
                thetas.push(components[idx].sample(&mut rng));
            }
            Ok(thetas)
        }
    }
}

fn sample_flip_probs(config: &PopulationConfig, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed, "noise", 0, 0);
    let n = config.n_bits as usize;
    match &config.noise {
        NoiseSpec::Constant { value } => vec![*value; n],
        NoiseSpec::Tiered { tiers } => (0..n)
            .map(|_| {
                let mut u: f64 = rng.gen();
                let mut tier = &tiers[tiers.len() - 1];
                for t in tiers {
                    if u < t.weight {
                        tier = t;
                        break;
                    }
                    u -= t.weight;
                }
                (tier.low + rng.gen::<f64>() * (tier.high - tier.low)).min(0.5)
            })
            .collect(),
    }
}

fn draw_patterns(
    seed: u64,
    n_devices: u32,
    thetas: &[f64],
    device_skew: &[f64],
) -> Vec<BitVec> {
    (0..n_devices)
        .into_par_iter()
        .map(|dev| {
            let mut rng = stream(seed, "pattern", dev as u64, 0);
            let skew = device_skew[dev as usize];
            let mut bits = BitVec::zeros(thetas.len());
            for (i, theta) in thetas.iter().enumerate() {
                let p = (theta + skew).clamp(0.0, 1.0);
                if rng.gen::<f64>() < p {
                    bits.set(i, true);
                }
            }
            bits
        })
        .collect()
}

/// Generates a population from a validated config and seed.
pub fn new_population(config: &PopulationConfig, rng_seed: u64) -> Result<DevicePopulation> {
    config.validate()?;
    let thetas = sample_thetas(config, rng_seed)?;
    let flip_probs = sample_flip_probs(config, rng_seed);
    let device_skew = vec![0.0; config.n_devices as usize];
    let patterns = draw_patterns(rng_seed, config.n_devices, &thetas, &device_skew);
    Ok(DevicePopulation {
        config: config.clone(),
        rng_seed,
        thetas,
        flip_probs,
        device_skew,
        patterns,
        aging: None,
    })
}

/// One power-up readout: every pattern bit flips independently with its
/// cell's probability. Deterministic in (seed, device, readout index).
pub fn sample_readout(
    pop: &DevicePopulation,
    device_id: u32,
    readout_index: u32,
) -> Result<SramReadout> {
    let pattern = pop.pattern(device_id)?;
    let mut rng = stream(pop.rng_seed, "readout", device_id as u64, readout_index as u64);
    let mut bits = pattern.clone();
    for (i, &f) in pop.flip_probs.iter().enumerate() {
        if rng.gen::<f64>() < f {
            bits.set(i, !bits.get(i));
        }
    }
    Ok(SramReadout {
        device_id,
        readout_index,
        bits,
    })
}

/// Applies an aging profile: shifts thetas so the population mean weight
/// becomes `0.5 + global_weight_shift`, adds region skews, and splits the
/// utilization delta evenly across the heavy/light halves (so the global
/// mean stays on target). Patterns are redrawn from the same streams, so
/// an identity profile reproduces the population unchanged.
pub fn apply_aging(pop: &DevicePopulation, profile: &AgingProfile) -> Result<DevicePopulation> {
    let n_bits = pop.config.n_bits as u64;
    for (name, region) in [
        ("wear", &profile.wear_region),
        ("bootloader", &profile.bootloader_region),
    ] {
        if let Some(skew) = region {
            if skew.region.end_bits() > n_bits {
                return Err(Error::Config(format!(
                    "{name} region [{}, {}) outside 0..{n_bits}",
                    skew.region.offset_bits,
                    skew.region.end_bits()
                )));
            }
        }
    }

    let mean: f64 = pop.thetas.iter().sum::<f64>() / pop.thetas.len() as f64;
    let delta = 0.5 + profile.global_weight_shift - mean;
    let mut thetas: Vec<f64> = pop.thetas.iter().map(|t| t + delta).collect();
    for skew in [&profile.wear_region, &profile.bootloader_region]
        .into_iter()
        .flatten()
    {
        let start = skew.region.offset_bits as usize;
        let end = skew.region.end_bits() as usize;
        for t in &mut thetas[start..end] {
            *t += skew.extra;
        }
    }
    for t in &mut thetas {
        *t = t.clamp(0.0, 1.0);
    }

    let half = profile.utilization_delta / 2.0;
    let device_skew: Vec<f64> = (0..pop.config.n_devices)
        .map(|dev| if pop.is_heavy_use(dev) { half } else { -half })
        .collect();

    let patterns = draw_patterns(pop.rng_seed, pop.config.n_devices, &thetas, &device_skew);
    Ok(DevicePopulation {
        config: pop.config.clone(),
        rng_seed: pop.rng_seed,
        thetas,
        flip_probs: pop.flip_probs.clone(),
        device_skew,
        patterns,
        aging: Some(profile.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config(theta: ThetaSpec, noise: NoiseSpec) -> PopulationConfig {
        PopulationConfig {
            n_devices: 4,
            n_bits: 64,
            theta,
            noise,
        }
    }

    #[test]
    fn degenerate_all_ones() {
        let cfg = tiny_config(
            ThetaSpec::Constant { value: 1.0 },
            NoiseSpec::Constant { value: 0.0 },
        );
        let pop = new_population(&cfg, 1).unwrap();
        for dev in 0..4 {
            let r = sample_readout(&pop, dev, 0).unwrap();
            assert_eq!(r.bits.count_ones(), 64);
        }
    }

    #[test]
    fn zero_noise_readout_equals_pattern() {
        let cfg = tiny_config(
            ThetaSpec::Constant { value: 0.5 },
            NoiseSpec::Constant { value: 0.0 },
        );
        let pop = new_population(&cfg, 2).unwrap();
        let r = sample_readout(&pop, 1, 7).unwrap();
        assert_eq!(&r.bits, pop.pattern(1).unwrap());
    }

    #[test]
    fn same_seed_same_population() {
        let cfg = PopulationConfig::paper_calibration();
        let small = PopulationConfig {
            n_devices: 3,
            n_bits: 256,
            ..cfg
        };
        let a = new_population(&small, 42).unwrap();
        let b = new_population(&small, 42).unwrap();
        assert_eq!(a.thetas, b.thetas);
        assert_eq!(a.flip_probs, b.flip_probs);
        for dev in 0..3 {
            assert_eq!(a.pattern(dev).unwrap(), b.pattern(dev).unwrap());
            assert_eq!(
                sample_readout(&a, dev, 5).unwrap(),
                sample_readout(&b, dev, 5).unwrap()
            );
        }
        let c = new_population(&small, 43).unwrap();
        assert_ne!(a.pattern(0).unwrap(), c.pattern(0).unwrap());
    }

    #[test]
    fn unknown_device_is_an_error() {
        let cfg = tiny_config(
            ThetaSpec::Constant { value: 0.5 },
            NoiseSpec::Constant { value: 0.0 },
        );
        let pop = new_population(&cfg, 3).unwrap();
        assert!(sample_readout(&pop, 4, 0).is_err());
    }

    #[test]
    fn invalid_configs_rejected() {
        let bad_bits = PopulationConfig {
            n_devices: 1,
            n_bits: 12,
            theta: ThetaSpec::Constant { value: 0.5 },
            noise: NoiseSpec::Constant { value: 0.0 },
        };
        assert!(new_population(&bad_bits, 0).is_err());

        let empty_mixture = PopulationConfig {
            n_devices: 1,
            n_bits: 8,
            theta: ThetaSpec::BetaMixture {
                modes: vec![],
                weights: vec![],
                concentration: 45.0,
            },
            noise: NoiseSpec::Constant { value: 0.0 },
        };
        assert!(new_population(&empty_mixture, 0).is_err());

        let bad_theta = PopulationConfig {
            n_devices: 1,
            n_bits: 8,
            theta: ThetaSpec::Constant { value: 1.5 },
            noise: NoiseSpec::Constant { value: 0.0 },
        };
        assert!(new_population(&bad_theta, 0).is_err());

        let bad_noise = PopulationConfig {
            n_devices: 1,
            n_bits: 8,
            theta: ThetaSpec::Constant { value: 0.5 },
            noise: NoiseSpec::Constant { value: 0.6 },
        };
        assert!(new_population(&bad_noise, 0).is_err());
    }

    #[test]
    fn identity_profile_leaves_population_unchanged() {
        let cfg = tiny_config(
            ThetaSpec::Constant { value: 0.5 },
            NoiseSpec::Constant { value: 0.01 },
        );
        let pop = new_population(&cfg, 9).unwrap();
        let aged = apply_aging(&pop, &AgingProfile::default()).unwrap();
        assert_eq!(pop.thetas, aged.thetas);
        for dev in 0..4 {
            assert_eq!(pop.pattern(dev).unwrap(), aged.pattern(dev).unwrap());
        }
    }

    #[test]
    fn aging_region_out_of_range_is_rejected() {
        let cfg = tiny_config(
            ThetaSpec::Constant { value: 0.5 },
            NoiseSpec::Constant { value: 0.0 },
        );
        let pop = new_population(&cfg, 9).unwrap();
        let profile = AgingProfile {
            wear_region: Some(RegionSkew {
                region: Region::new(32, 64),
                extra: 0.01,
            }),
            ..AgingProfile::default()
        };
        assert!(apply_aging(&pop, &profile).is_err());
    }

    #[test]
    fn aging_shifts_theta_mean() {
        let cfg = PopulationConfig {
            n_devices: 8,
            n_bits: 4096,
            theta: ThetaSpec::Constant { value: 0.5 },
            noise: NoiseSpec::Constant { value: 0.0 },
        };
        let pop = new_population(&cfg, 11).unwrap();
        let aged = apply_aging(
            &pop,
            &AgingProfile {
                global_weight_shift: 0.008,
                ..AgingProfile::default()
            },
        )
        .unwrap();
        let mean: f64 = aged.thetas().iter().sum::<f64>() / aged.thetas().len() as f64;
        assert!((mean - 0.508).abs() < 1e-12);
    }
}
