//! Height of `T_n` relative to the round budget `m_n`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{par_trials, ExperimentConfig, TrialRecord};
use crate::error::Result;
use crate::rootfind::m_n;
use crate::treegen::generate_rrt;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub k: u32,
    /// Fraction of trials with `|ht - m_n| >= k`.
    pub frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightSummary {
    pub n: usize,
    pub m_n: u32,
    pub trials: u64,
    pub mean_height: f64,
    /// `mean_height - m_n`.
    pub mean_offset: f64,
    /// Counts of `ht - m_n`.
    pub histogram: BTreeMap<i64, u64>,
    /// `k = 0, 1, ...` up to one past the largest observed deviation.
    pub tail: Vec<TailRow>,
}

impl HeightSummary {
    pub fn from_heights(n: usize, heights: &[u32]) -> Self {
        let m = m_n(n);
        let trials = heights.len() as u64;
        let mut histogram = BTreeMap::new();
        for &h in heights {
            *histogram.entry(h as i64 - m as i64).or_insert(0u64) += 1;
        }
        let max_dev = histogram.keys().map(|d: &i64| d.unsigned_abs()).max().unwrap_or(0) as u32;
        let tail = (0..=max_dev + 1)
            .map(|k| {
                let hits: u64 = histogram
                    .iter()
                    .filter(|(d, _)| d.unsigned_abs() >= k as u64)
                    .map(|(_, c)| c)
                    .sum();
                TailRow {
                    k,
                    frequency: hits as f64 / trials.max(1) as f64,
                }
            })
            .collect();
        let mean_height = heights.iter().map(|&h| h as f64).sum::<f64>() / trials.max(1) as f64;
        HeightSummary {
            n,
            m_n: m,
            trials,
            mean_height,
            mean_offset: mean_height - m as f64,
            histogram,
            tail,
        }
    }
}

/// Empirical law of `ht(T_n) - m_n`.
pub fn run_height(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, HeightSummary)> {
    config.validate()?;
    let n = config.n;
    let heights: Vec<Result<(u64, u32)>> =
        par_trials(config.master_seed, config.trials, |_, seed| Ok((seed, generate_rrt(n, seed)?.height())));
    let heights: Vec<(u64, u32)> = heights.into_iter().collect::<Result<_>>()?;
    let records = heights
        .iter()
        .enumerate()
        .map(|(i, &(seed, h))| TrialRecord {
            trial: i as u64,
            seed: Some(seed),
            captured: None,
            set_size: None,
            height: Some(h),
            k: None,
            n,
        })
        .collect();
    let hs: Vec<u32> = heights.iter().map(|h| h.1).collect();
    Ok((records, HeightSummary::from_heights(n, &hs)))
}
