//! Law of the size of the subtree of vertex 2, which is uniform on `1..n-1`.

use serde::Serialize;

use super::stats::{chi_square_uniform, ChiSquareTest};
use super::{par_trials, ExperimentConfig, TrialRecord};
use crate::error::Result;
use crate::treegen::{enumerate_increasing_trees, generate_rrt, lower_split_size};

/// Minimum expected count per chi-square bin.
pub const MIN_EXPECTED_PER_BIN: f64 = 20.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityReport {
    pub n: usize,
    /// Number of trees (sampled, or all of them for the exact variant).
    pub trees: u64,
    pub exact: bool,
    pub test: ChiSquareTest,
}

fn report(n: usize, counts: &[u64], exact: bool) -> UniformityReport {
    UniformityReport {
        n,
        trees: counts.iter().sum(),
        exact,
        test: chi_square_uniform(counts, MIN_EXPECTED_PER_BIN),
    }
}

/// Chi-square test of sampled `|T_n^{2,↓}|` against `Unif{1..n-1}`.
pub fn run_uniformity(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, UniformityReport)> {
    config.validate()?;
    let n = config.n;
    let sizes: Vec<Result<(u64, u32)>> = par_trials(config.master_seed, config.trials, |_, seed| {
        Ok((seed, lower_split_size(&generate_rrt(n, seed)?)?))
    });
    let sizes: Vec<(u64, u32)> = sizes.into_iter().collect::<Result<_>>()?;
    let mut counts = vec![0u64; n - 1];
    for &(_, s) in &sizes {
        counts[s as usize - 1] += 1;
    }
    let records = sizes
        .iter()
        .enumerate()
        .map(|(i, &(seed, s))| TrialRecord {
            trial: i as u64,
            seed: Some(seed),
            captured: None,
            set_size: Some(s as u64),
            height: None,
            k: None,
            n,
        })
        .collect();
    Ok((records, report(n, &counts, false)))
}

/// The same statistic over every increasing tree on `1..=n`.
pub fn uniformity_exact(n: usize) -> Result<UniformityReport> {
    let mut counts = vec![0u64; n.saturating_sub(1).max(1)];
    for t in enumerate_increasing_trees(n)? {
        counts[lower_split_size(&t)? as usize - 1] += 1;
    }
    Ok(report(n, &counts, true))
}
