//! Rate estimation statistics.

use serde::{Deserialize, Serialize};

/// Two-sided 95% z-score.
const Z_95: f64 = 1.959963984540054;

/// Wilson score interval for a binomial proportion at 95% confidence.
///
/// Unlike the normal approximation it stays inside `[0, 1]` and behaves
/// at the extremes (all accepts, all rejects), which rate-1.0 anchors
/// and rate-0.0 baselines both hit.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(successes <= trials, "successes cannot exceed trials");
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z_95 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// A measured acceptance rate with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    /// Number of accepted trials.
    pub successes: u64,
    /// Number of trials.
    pub trials: u64,
    /// Point estimate `successes / trials`.
    pub rate: f64,
    /// Wilson 95% lower bound.
    pub wilson_low: f64,
    /// Wilson 95% upper bound.
    pub wilson_high: f64,
}

impl RateEstimate {
    /// Builds the estimate from counts.
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        let (wilson_low, wilson_high) = wilson_interval(successes, trials);
        Self { successes, trials, rate, wilson_low, wilson_high }
    }
}
