//! Reconstruction failure rates: analytic model and full-extractor
//! Monte-Carlo simulation.
//!
//! The analytic model assumes independent per-bit errors: a repetition
//! group fails when more than half its bits flip, a Golay block fails at
//! four or more group errors, and the extractor fails when any block
//! does. With a single worst-case error rate this upper-bounds the
//! heterogeneous reality; the `cells` variant evaluates the same model
//! with per-cell probabilities instead.

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::fuzzy::{enroll, reconstruct, FuzzyConfig, HashStreamOffsets};
use crate::rng::stream;

fn check_rate(p_e: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&p_e) {
        return Err(Error::Config(format!("bit error rate {p_e} outside [0, 0.5]")));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// P(Binomial(n, p) >= k).
fn binomial_tail(n: usize, p: f64, k: usize) -> f64 {
    (k..=n)
        .map(|j| binomial(n, j) * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32))
        .sum()
}

/// Analytic failure rate under i.i.d. per-bit error probability `p_e`.
pub fn analytic_failure_rate(p_e: f64, config: &FuzzyConfig) -> Result<f64> {
    check_rate(p_e)?;
    let r = config.repetitions().get();
    let group_error = binomial_tail(r, p_e, r / 2 + 1);
    let block_fail = binomial_tail(24, group_error, 4);
    Ok(1.0 - (1.0 - block_fail).powi(config.blocks() as i32))
}

/// Analytic failure rate with heterogeneous per-cell flip probabilities.
/// `flip_probs` covers the SRAM segment the config reads, in order.
pub fn analytic_failure_rate_cells(flip_probs: &[f64], config: &FuzzyConfig) -> Result<f64> {
    let want = config.sram_len_bits() as usize;
    if flip_probs.len() != want {
        return Err(Error::Data(format!(
            "{} flip probabilities for a {want}-bit segment",
            flip_probs.len()
        )));
    }
    for &f in flip_probs {
        check_rate(f)?;
    }
    let r = config.repetitions().get();
    let mut success = 1.0f64;
    for block_cells in flip_probs.chunks(24 * r) {
        let group_probs: Vec<f64> = block_cells
            .chunks(r)
            .map(|cells| poisson_binomial_tail(cells, r / 2 + 1))
            .collect();
        // dp[j] = P(exactly j group errors so far), j <= 3; a block fails
        // at four or more
        let mut dp = [1.0f64, 0.0, 0.0, 0.0];
        for &q in &group_probs {
            for j in (1..4).rev() {
                dp[j] = dp[j] * (1.0 - q) + dp[j - 1] * q;
            }
            dp[0] *= 1.0 - q;
        }
        let block_fail = 1.0 - (dp[0] + dp[1] + dp[2] + dp[3]);
        success *= 1.0 - block_fail;
    }
    Ok(1.0 - success)
}

/// P(at least `k` of the independent events with probabilities `ps`).
fn poisson_binomial_tail(ps: &[f64], k: usize) -> f64 {
    let mut dp = vec![0.0f64; ps.len() + 1];
    dp[0] = 1.0;
    for (i, &p) in ps.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            dp[j] = dp[j] * (1.0 - p) + dp[j - 1] * p;
        }
        dp[0] *= 1.0 - p;
    }
    dp[k..].iter().sum()
}

/// Monte-Carlo outcome of repeated enroll/corrupt/reconstruct runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FailureCount {
    pub failures: u64,
    pub trials: u64,
}

impl FailureCount {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    /// Binomial standard error of the observed rate.
    pub fn std_error(&self) -> f64 {
        let p = self.rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Full-extractor simulation with i.i.d. bit errors: every trial enrolls a
/// fresh random reference, flips each segment bit with `p_e`, reconstructs,
/// and counts a failure when reconstruction errors out or returns a wrong
/// key. Deterministic in `seed`.
pub fn simulate_failure_rate(
    config: &FuzzyConfig,
    p_e: f64,
    trials: u64,
    seed: u64,
) -> Result<FailureCount> {
    check_rate(p_e)?;
    let probs = vec![p_e; config.sram_len_bits() as usize];
    simulate_failure_rate_cells(config, &probs, trials, seed)
}

/// Full-extractor simulation with per-cell flip probabilities.
pub fn simulate_failure_rate_cells(
    config: &FuzzyConfig,
    flip_probs: &[f64],
    trials: u64,
    seed: u64,
) -> Result<FailureCount> {
    let want = config.sram_len_bits() as usize;
    if flip_probs.len() != want {
        return Err(Error::Data(format!(
            "{} flip probabilities for a {want}-bit segment",
            flip_probs.len()
        )));
    }
    const BATCH: u64 = 2048;
    let batches = trials.div_ceil(BATCH);
    let failures: u64 = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = stream(seed, "failure-sim", batch, 0);
            let in_batch = BATCH.min(trials - batch * BATCH);
            let seg_bytes = want / 8;
            let mut count = 0u64;
            for _ in 0..in_batch {
                let mut reference_bytes = vec![0u8; seg_bytes];
                rng.fill_bytes(&mut reference_bytes);
                let reference = BitVec::from_bytes(reference_bytes);
                let mut offsets = HashStreamOffsets::from_seed(rng.gen());
                let (helper, key) =
                    enroll(&reference, config, &mut offsets).expect("valid lengths");
                let mut noisy = reference;
                for (i, &f) in flip_probs.iter().enumerate() {
                    if f > 0.0 && rng.gen::<f64>() < f {
                        noisy.set(i, !noisy.get(i));
                    }
                }
                match reconstruct(&noisy, &helper) {
                    Ok(rec) if rec.key_bytes == key.key_bytes => {}
                    _ => count += 1,
                }
            }
            count
        })
        .sum();
    Ok(FailureCount { failures, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecc::Repetition;
    use crate::fuzzy::HashId;

    fn config(offset_bytes: u8, r: u8) -> FuzzyConfig {
        FuzzyConfig::new(offset_bytes, Repetition::new(r).unwrap(), HashId::Sha256, 0).unwrap()
    }

    #[test]
    fn zero_error_rate_never_fails() {
        assert_eq!(analytic_failure_rate(0.0, &config(9, 3)).unwrap(), 0.0);
        let mc = simulate_failure_rate(&config(9, 3), 0.0, 500, 1).unwrap();
        assert_eq!(mc.failures, 0);
    }

    #[test]
    fn rate_domain_is_checked() {
        assert!(analytic_failure_rate(0.6, &config(9, 3)).is_err());
        assert!(analytic_failure_rate(-0.1, &config(9, 3)).is_err());
    }

    #[test]
    fn more_repetitions_never_hurt() {
        for p_e in [0.1, 0.2, 0.3] {
            let mut last = f64::INFINITY;
            for r in [1u8, 3, 5, 7, 9, 11, 13] {
                let rate = analytic_failure_rate(p_e, &config(9, r)).unwrap();
                assert!(rate <= last + 1e-15, "p_e={p_e} r={r}");
                last = rate;
            }
        }
    }

    #[test]
    fn homogeneous_cells_recover_the_iid_model() {
        let cfg = config(9, 3);
        let probs = vec![0.2; cfg.sram_len_bits() as usize];
        let hetero = analytic_failure_rate_cells(&probs, &cfg).unwrap();
        let iid = analytic_failure_rate(0.2, &cfg).unwrap();
        assert!((hetero - iid).abs() < 1e-12);
    }

    #[test]
    fn analytic_tracks_simulation_at_moderate_noise() {
        let cfg = config(9, 3);
        let p_e = 0.2;
        let analytic = analytic_failure_rate(p_e, &cfg).unwrap();
        let mc = simulate_failure_rate(&cfg, p_e, 20_000, 7).unwrap();
        let diff = (mc.rate() - analytic).abs();
        assert!(
            diff < 4.0 * mc.std_error(),
            "analytic {analytic} vs simulated {} +- {}",
            mc.rate(),
            mc.std_error()
        );
    }

    #[test]
    fn simulation_is_deterministic_in_the_seed() {
        let cfg = config(9, 3);
        let a = simulate_failure_rate(&cfg, 0.25, 4000, 3).unwrap();
        let b = simulate_failure_rate(&cfg, 0.25, 4000, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn poisson_binomial_tail_matches_binomial() {
        let ps = vec![0.3; 7];
        let direct = binomial_tail(7, 0.3, 4);
        assert!((poisson_binomial_tail(&ps, 4) - direct).abs() < 1e-12);
    }
}
