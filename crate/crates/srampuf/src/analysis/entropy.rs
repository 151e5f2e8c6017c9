//! Min-entropy, its empirical estimator, and the estimator's expected
//! value and convergence rate over finite samples.

use statrs::distribution::{Binomial, Discrete};

use crate::error::{Error, Result};

/// Min-entropy of the most probable outcome: `-log2(p_max)`.
///
/// Callers pass `max(p, 1 - p)` for a single bit.
pub fn min_entropy(p_max: f64) -> Result<f64> {
    if !(p_max > 0.0 && p_max <= 1.0) {
        return Err(Error::Config(format!("p_max {p_max} outside (0, 1]")));
    }
    Ok(-p_max.log2())
}

/// Empirical per-bit min-entropy from `i` ones in `n` samples.
pub fn empirical_min_entropy(i: u64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("empirical min-entropy of zero samples".into()));
    }
    if i > n {
        return Err(Error::Config(format!("{i} ones in {n} samples")));
    }
    let p = i as f64 / n as f64;
    Ok(-p.max(1.0 - p).log2())
}

/// Expected value of the empirical estimator at sample size `n` when the
/// true one-probability is `p`: the binomial average of
/// `empirical_min_entropy(i, n)` with log-domain weights.
pub fn expected_estimator(p: f64, n: u64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Config(format!("probability {p} outside (0, 1)")));
    }
    if n == 0 {
        return Err(Error::Config("expected estimator of zero samples".into()));
    }
    let binom = Binomial::new(p, n).map_err(|e| Error::Config(e.to_string()))?;
    let mut acc = 0.0;
    for i in 0..=n {
        let w = binom.ln_pmf(i).exp();
        if w > 0.0 {
            acc += w * empirical_min_entropy(i, n)?;
        }
    }
    Ok(acc)
}

/// Central-limit convergence rate of the estimator: `1 / sqrt(n)`
/// (per-bit dispersion is close to one).
pub fn estimator_std_error(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("standard error of zero samples".into()));
    }
    Ok(1.0 / (n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn min_entropy_anchors() {
        assert_eq!(min_entropy(0.5).unwrap(), 1.0);
        assert_eq!(min_entropy(1.0).unwrap(), 0.0);
        assert!((min_entropy(0.596).unwrap() - 0.7467).abs() < 1e-4);
        assert!(min_entropy(0.0).is_err());
        assert!(min_entropy(1.5).is_err());
    }

    #[test]
    fn empirical_matches_definition() {
        assert_eq!(empirical_min_entropy(10, 10).unwrap(), 0.0);
        assert_eq!(empirical_min_entropy(5, 10).unwrap(), 1.0);
        // direct evaluation: -log2(421/708)
        assert!((empirical_min_entropy(421, 708).unwrap() - 0.749928).abs() < 1e-5);
        assert!(empirical_min_entropy(1, 0).is_err());
        assert!(empirical_min_entropy(11, 10).is_err());
    }

    /// Eq-consistency: the empirical estimator is the min-entropy of the
    /// empirical maximum frequency, for every (i, n).
    #[test]
    fn empirical_is_min_entropy_of_frequency() {
        for n in [1u64, 2, 7, 50, 708] {
            for i in 0..=n {
                let p = i as f64 / n as f64;
                let expect = min_entropy(p.max(1.0 - p)).unwrap();
                assert!((empirical_min_entropy(i, n).unwrap() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expected_estimator_asymptotes() {
        // ideal coin approaches 1 from below
        let e_small = expected_estimator(0.5, 100).unwrap();
        let e_big = expected_estimator(0.5, 5000).unwrap();
        assert!(e_small < e_big && e_big < 1.0);
        // biased bit approaches its true min-entropy
        let e = expected_estimator(0.7, 5000).unwrap();
        assert!((e - 0.5146).abs() < 0.01);
    }

    /// Monte-Carlo oracle: the closed-form expectation must match the mean
    /// of simulated Bernoulli estimates.
    #[test]
    fn expected_estimator_matches_monte_carlo() {
        let p = 0.596;
        let n = 708u64;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let trials = 20_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            let ones = (0..n).filter(|_| rng.gen::<f64>() < p).count() as u64;
            acc += empirical_min_entropy(ones, n).unwrap();
        }
        let mc = acc / trials as f64;
        let exact = expected_estimator(p, n).unwrap();
        assert!(
            (mc - exact).abs() < 0.005,
            "monte-carlo {mc} vs exact {exact}"
        );
    }

    #[test]
    fn std_error_values() {
        assert_eq!(estimator_std_error(100).unwrap(), 0.1);
        assert!((estimator_std_error(144).unwrap() - 0.0833).abs() < 1e-4);
        assert_eq!(estimator_std_error(1).unwrap(), 1.0);
    }
}
