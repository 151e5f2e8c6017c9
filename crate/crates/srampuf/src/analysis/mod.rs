//! Statistical apparatus: entropy estimation, population metrics,
//! helper-data leakage, and reconstruction failure rates.

mod entropy;
mod failure;
mod grid;
mod leakage;
mod metrics;

pub use entropy::{empirical_min_entropy, estimator_std_error, expected_estimator, min_entropy};
pub use failure::{
    analytic_failure_rate, analytic_failure_rate_cells, simulate_failure_rate,
    simulate_failure_rate_cells, FailureCount,
};
pub use grid::{assess_grid, ExtractorAssessment, OFFSET_BYTES, REPETITIONS};
pub use leakage::{
    binary_entropy, coset_min_entropy, exact_r1_block, group_information, remaining_entropy,
    BiasSpec, LeakageMode,
};
pub use metrics::{
    bit_alias, correlation_matrix, frac_hamming_distance, hamming_weight_blocks, inter_stats,
    intra_stats, max_bit_error, percentile_type7, BlockStats, CorrelationMatrix, DistanceStats,
    EntropyReport, MaxBitError, StatsKind,
};
