//! Estimators used by the experiment summaries.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Interval {
    assert!(trials > 0, "interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval {
        lower: (center - half).clamp(0.0, 1.0).min(p),
        upper: (center + half).clamp(0.0, 1.0).max(p),
    }
}

/// Nearest-rank quantile of sorted data: the element of rank `⌈q N⌉`,
/// with rank clamped to `1..=N`.
pub fn nearest_rank<T: Copy>(sorted: &[T], q: f64) -> T {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SizeQuantiles {
    pub p50: u64,
    pub p90: u64,
    pub p99: u64,
    pub max: u64,
    pub mean: f64,
}

impl SizeQuantiles {
    /// `sizes` need not be sorted.
    pub fn from_samples(sizes: &[u64]) -> Self {
        let mut sorted = sizes.to_vec();
        sorted.sort_unstable();
        let mean = sorted.iter().map(|&s| s as f64).sum::<f64>() / sorted.len() as f64;
        SizeQuantiles {
            p50: nearest_rank(&sorted, 0.5),
            p90: nearest_rank(&sorted, 0.9),
            p99: nearest_rank(&sorted, 0.99),
            max: *sorted.last().unwrap(),
            mean,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub bins: usize,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// `(first value, last value, observed, expected)` per bin.
    pub table: Vec<(u64, u64, u64, f64)>,
}

/// Chi-square goodness of fit of counts over the values `1..=m` against the
/// uniform law. `counts[v - 1]` is the number of observations equal to `v`.
/// Values are grouped into equal-width bins so that each bin expects at least
/// `min_expected` observations when possible.
pub fn chi_square_uniform(counts: &[u64], min_expected: f64) -> ChiSquareTest {
    let m = counts.len();
    assert!(m > 0, "no categories");
    let total: u64 = counts.iter().sum();
    let bins = ((total as f64 / min_expected).floor() as usize).clamp(1, m);
    let mut table = Vec::with_capacity(bins);
    let mut statistic = 0.0;
    for b in 0..bins {
        let start = b * m / bins;
        let end = (b + 1) * m / bins;
        let observed: u64 = counts[start..end].iter().sum();
        let expected = total as f64 * (end - start) as f64 / m as f64;
        if expected > 0.0 {
            statistic += (observed as f64 - expected).powi(2) / expected;
        }
        table.push((start as u64 + 1, end as u64, observed, expected));
    }
    let dof = bins - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map(|d| d.sf(statistic)).unwrap_or(f64::NAN)
    };
    ChiSquareTest {
        bins,
        statistic,
        degrees_of_freedom: dof,
        p_value,
        table,
    }
}
