//! Detection, size and tradeoff runs: sweep `k` over the same sampled trees.

use serde::Serialize;

use super::height::HeightSummary;
use super::stats::{nearest_rank, wilson_interval, Interval, SizeQuantiles, Z95};
use super::{par_trials, ExperimentConfig, TrialRecord};
use crate::error::Result;
use crate::rng::substream_seed;
use crate::rootfind::{confidence_set_rk, greedy_elimination_order, jordan_ranking, m_n, peel_rounds, rounds_for, Algorithm};
use crate::treegen::{enumerate_increasing_trees, generate_rrt, IncreasingTree};

const GREEDY_STREAM: u64 = 1;

/// Per-`k` estimates over all trials of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryStats {
    pub k: u32,
    pub rounds: u32,
    pub trials: u64,
    /// Trials with the root outside the set.
    pub errors: u64,
    pub error_rate: f64,
    pub error_interval: Interval,
    /// Trials with the root inside and `|set| <= joint_size_bound`.
    pub joint_successes: u64,
    pub joint_success_rate: f64,
    /// `2^(4k-1)`, the size bound that holds whenever no zone-`4k` vertex
    /// carries a tall subtree.
    pub joint_size_bound: f64,
    pub size: SizeQuantiles,
    /// Trials with `|set| >= 2^(4k)`.
    pub size_at_least_2_pow_4k: u64,
    pub size_at_least_2_pow_4k_rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub m_n: u32,
    pub algorithm: Algorithm,
    pub per_k: Vec<SummaryStats>,
    pub height: HeightSummary,
    #[serde(skip)]
    sizes: Vec<Vec<u64>>,
}

impl SweepReport {
    pub fn stats_for(&self, k: u32) -> Option<&SummaryStats> {
        self.per_k.iter().find(|s| s.k == k)
    }

    /// Raw per-trial set sizes for the `i`-th entry of `per_k`.
    pub fn sizes(&self, i: usize) -> &[u64] {
        &self.sizes[i]
    }
}

struct TrialOutcome {
    seed: u64,
    height: u32,
    per_k: Vec<(bool, u64)>,
}

/// Root membership and set size for each `k`, all read from one tree.
fn evaluate_tree(t: &IncreasingTree, ks: &[u32], algorithm: Algorithm, seed: u64) -> Vec<(bool, u64)> {
    let n = t.n();
    let peel = peel_rounds(t);
    let last = peel.iter().copied().max().unwrap_or(0) as usize;
    // survivors[r] = number of vertices still present after r rounds
    let mut survivors = vec![0u64; last + 2];
    for &r in &peel[1..] {
        survivors[r as usize] += 1;
    }
    let mut acc = 0;
    for r in (0..=last + 1).rev() {
        let here = survivors[r];
        survivors[r] = acc;
        acc += here;
    }
    // survivors[r] now counts rounds strictly greater than r
    let strip = |k: u32| {
        let r = rounds_for(n, k);
        let size = survivors[(r as usize).min(last + 1)];
        (peel[1] > r, size)
    };
    match algorithm {
        Algorithm::LeafStrip => ks.iter().map(|&k| strip(k)).collect(),
        Algorithm::Jordan => {
            let rank = jordan_ranking(t).iter().position(|&v| v == 1).expect("root is ranked") as u64;
            ks.iter()
                .map(|&k| {
                    let (_, s) = strip(k);
                    (rank < s, s)
                })
                .collect()
        }
        Algorithm::Greedy => {
            let order = greedy_elimination_order(t, substream_seed(seed, GREEDY_STREAM));
            let from_end = (n - 1 - order.iter().position(|&v| v == 1).expect("root is deleted")) as u64;
            ks.iter()
                .map(|&k| {
                    let (_, s) = strip(k);
                    (from_end < s, s)
                })
                .collect()
        }
    }
}

/// Samples `config.trials` trees and evaluates every `k` on each. Baselines
/// are given the same set size as leaf stripping on the same tree.
pub fn run_sweep(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, SweepReport)> {
    config.validate()?;
    let n = config.n;
    let ks = &config.k_values;
    let outcomes: Vec<Result<TrialOutcome>> = par_trials(config.master_seed, config.trials, |_, seed| {
        let t = generate_rrt(n, seed)?;
        Ok(TrialOutcome {
            seed,
            height: t.height(),
            per_k: evaluate_tree(&t, ks, config.algorithm, seed),
        })
    });
    let outcomes: Vec<TrialOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(outcomes.len() * ks.len());
    for (i, o) in outcomes.iter().enumerate() {
        for (&k, &(captured, size)) in ks.iter().zip(&o.per_k) {
            records.push(TrialRecord {
                trial: i as u64,
                seed: Some(o.seed),
                captured: Some(captured),
                set_size: Some(size),
                height: Some(o.height),
                k: Some(k),
                n,
            });
        }
    }

    let trials = config.trials;
    let mut per_k = Vec::with_capacity(ks.len());
    let mut sizes = Vec::with_capacity(ks.len());
    for (j, &k) in ks.iter().enumerate() {
        let column: Vec<(bool, u64)> = outcomes.iter().map(|o| o.per_k[j]).collect();
        let errors = column.iter().filter(|c| !c.0).count() as u64;
        let bound = 2f64.powi(4 * k as i32 - 1);
        let joint = column.iter().filter(|&&(c, s)| c && s as f64 <= bound).count() as u64;
        let big = column.iter().filter(|&&(_, s)| s as f64 >= 2f64.powi(4 * k as i32)).count() as u64;
        let sz: Vec<u64> = column.iter().map(|c| c.1).collect();
        per_k.push(SummaryStats {
            k,
            rounds: rounds_for(n, k),
            trials,
            errors,
            error_rate: errors as f64 / trials as f64,
            error_interval: wilson_interval(errors, trials, Z95),
            joint_successes: joint,
            joint_success_rate: joint as f64 / trials as f64,
            joint_size_bound: bound,
            size: SizeQuantiles::from_samples(&sz),
            size_at_least_2_pow_4k: big,
            size_at_least_2_pow_4k_rate: big as f64 / trials as f64,
        });
        sizes.push(sz);
    }
    let heights: Vec<u32> = outcomes.iter().map(|o| o.height).collect();
    let report = SweepReport {
        n,
        m_n: m_n(n),
        algorithm: config.algorithm,
        per_k,
        height: HeightSummary::from_heights(n, &heights),
        sizes,
    };
    Ok((records, report))
}

/// Estimates `P{1 ∉ R_k}` and the joint success event for each `k`.
pub fn run_detection(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, SweepReport)> {
    run_sweep(config)
}

/// Quantiles of `|R_k|` and the frequency of `|R_k| >= 2^(4k)` for each `k`.
pub fn run_size(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, SweepReport)> {
    run_sweep(config)
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonRow {
    pub epsilon: f64,
    /// Smallest swept `k` with error rate at most `epsilon`.
    pub minimal_k: Option<u32>,
    pub error_rate: Option<f64>,
    /// Nearest-rank `epsilon`-quantile of the set size at `minimal_k`.
    pub size_quantile: Option<u64>,
    /// `ln(1 / (4 epsilon))`; smaller `k` cannot reach error `epsilon` for large `n`.
    pub k_threshold: f64,
    /// Largest error among swept `k` below `k_threshold`.
    pub max_error_below_threshold: Option<f64>,
    pub below_threshold_exceeds_epsilon: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TradeoffReport {
    pub sweep: SweepReport,
    pub rows: Vec<EpsilonRow>,
}

/// For each `epsilon` in the grid, the cheapest swept `k` meeting error
/// `epsilon` and the `epsilon`-quantile of the set size there.
pub fn run_tradeoff(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, TradeoffReport)> {
    let (records, sweep) = run_sweep(config)?;
    let mut order: Vec<usize> = (0..sweep.per_k.len()).collect();
    order.sort_by_key(|&i| sweep.per_k[i].k);
    let rows = config
        .epsilon_grid
        .iter()
        .map(|&epsilon| {
            let hit = order.iter().copied().find(|&i| sweep.per_k[i].error_rate <= epsilon);
            let k_threshold = (1.0 / (4.0 * epsilon)).ln();
            let below: Vec<f64> = order
                .iter()
                .filter(|&&i| (sweep.per_k[i].k as f64) < k_threshold)
                .map(|&i| sweep.per_k[i].error_rate)
                .collect();
            let max_below = below.iter().copied().reduce(f64::max);
            EpsilonRow {
                epsilon,
                minimal_k: hit.map(|i| sweep.per_k[i].k),
                error_rate: hit.map(|i| sweep.per_k[i].error_rate),
                size_quantile: hit.map(|i| {
                    let mut s = sweep.sizes[i].clone();
                    s.sort_unstable();
                    nearest_rank(&s, epsilon)
                }),
                k_threshold,
                max_error_below_threshold: max_below,
                below_threshold_exceeds_epsilon: max_below.map(|e| e > epsilon),
            }
        })
        .collect();
    Ok((records, TradeoffReport { sweep, rows }))
}

/// Exact leaf-stripping statistics over the uniform law on increasing trees.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactStats {
    pub k: u32,
    pub rounds: u32,
    pub trees: u64,
    pub error_probability: f64,
    pub mean_size: f64,
    pub size_variance: f64,
}

/// Enumerates every increasing tree on `1..=n` (so `n <= 10`).
pub fn exact_sweep(n: usize, ks: &[u32]) -> Result<Vec<ExactStats>> {
    let trees: Vec<IncreasingTree> = enumerate_increasing_trees(n)?.collect();
    let count = trees.len() as f64;
    Ok(ks
        .iter()
        .map(|&k| {
            let (mut errors, mut sum, mut sum_sq) = (0u64, 0f64, 0f64);
            for t in &trees {
                let set = confidence_set_rk(t, k);
                if !set.contains(1) {
                    errors += 1;
                }
                let s = set.len() as f64;
                sum += s;
                sum_sq += s * s;
            }
            let mean = sum / count;
            ExactStats {
                k,
                rounds: rounds_for(n, k),
                trees: trees.len() as u64,
                error_probability: errors as f64 / count,
                mean_size: mean,
                size_variance: sum_sq / count - mean * mean,
            }
        })
        .collect())
}
