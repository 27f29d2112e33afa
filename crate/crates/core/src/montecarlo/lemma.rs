//! Verification runs for the zone-flipping involution.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{par_trials, ExperimentConfig, TrialRecord};
use crate::error::Result;
use crate::treegen::{enumerate_increasing_trees, generate_rrt, IncreasingTree};
use crate::ulam::{exact_flip_census, verify_flip_properties, FlipCensus, FlipProperty, FlipReport};

/// Failures kept in a report; further ones are only counted.
pub const MAX_REPORTED_FAILURES: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub property: FlipProperty,
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaFailure {
    pub n: usize,
    /// Enumeration index (exhaustive) or trial index (sampled).
    pub trial: u64,
    pub seed: Option<u64>,
    pub k: u32,
    pub property: FlipProperty,
    pub witness: Option<u32>,
    pub detail: Option<String>,
    pub parents: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub mode: &'static str,
    pub trees: u64,
    pub tallies: Vec<PropertyTally>,
    pub failures: Vec<LemmaFailure>,
    pub census: Vec<FlipCensus>,
    pub passed: bool,
}

struct Checked {
    n: usize,
    trial: u64,
    seed: Option<u64>,
    height: u32,
    parents: Vec<u32>,
    reports: Vec<(u32, FlipReport)>,
}

fn check_tree(t: &IncreasingTree, ks: &[u32], trial: u64, seed: Option<u64>) -> Result<Checked> {
    Ok(Checked {
        n: t.n(),
        trial,
        seed,
        height: t.height(),
        parents: if t.n() <= 64 { t.parents().to_vec() } else { Vec::new() },
        reports: ks.iter().map(|&k| Ok((k, verify_flip_properties(t, k)?))).collect::<Result<_>>()?,
    })
}

/// Exhaustive mode checks every tree with `n <= n_max` and adds the exact
/// census for every height threshold `0..n`; sampled mode checks
/// `trials` random trees of size `n`. `k_values` defaults to `[1]`.
pub fn run_lemma_verify(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, LemmaReport)> {
    config.validate()?;
    let ks: Vec<u32> = if config.k_values.is_empty() { vec![1] } else { config.k_values.clone() };

    let mut checked = Vec::new();
    let mut census = Vec::new();
    if config.exhaustive {
        for n in 1..=config.n_max {
            for (i, t) in enumerate_increasing_trees(n)?.enumerate() {
                checked.push(check_tree(&t, &ks, i as u64, None)?);
            }
            for &k in &ks {
                for h in 0..n as u32 {
                    census.push(exact_flip_census(n, 4 * k, h)?);
                }
            }
        }
    } else {
        let n = config.n;
        let sampled: Vec<Result<Checked>> = par_trials(config.master_seed, config.trials, |i, seed| {
            check_tree(&generate_rrt(n, seed)?, &ks, i, Some(seed))
        });
        checked = sampled.into_iter().collect::<Result<_>>()?;
    }

    let mut tallies: BTreeMap<FlipProperty, PropertyTally> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut records = Vec::new();
    for (idx, c) in checked.iter().enumerate() {
        for (k, report) in &c.reports {
            for check in &report.checks {
                let tally = tallies.entry(check.property).or_insert(PropertyTally {
                    property: check.property,
                    checked: 0,
                    failed: 0,
                });
                tally.checked += 1;
                if !check.passed {
                    tally.failed += 1;
                    if failures.len() < MAX_REPORTED_FAILURES {
                        failures.push(LemmaFailure {
                            n: c.n,
                            trial: c.trial,
                            seed: c.seed,
                            k: *k,
                            property: check.property,
                            witness: check.witness,
                            detail: check.detail.clone(),
                            parents: (!c.parents.is_empty()).then(|| c.parents.clone()),
                        });
                    }
                }
            }
            records.push(TrialRecord {
                trial: idx as u64,
                seed: c.seed,
                captured: Some(report.all_passed()),
                set_size: None,
                height: Some(c.height),
                k: Some(*k),
                n: c.n,
            });
        }
    }
    let tallies: Vec<PropertyTally> = tallies.into_values().collect();
    let passed = tallies.iter().all(|t| t.failed == 0) && census.iter().all(FlipCensus::passed);
    let report = LemmaReport {
        mode: if config.exhaustive { "exhaustive" } else { "sampled" },
        trees: checked.len() as u64,
        tallies,
        failures,
        census,
        passed,
    };
    Ok((records, report))
}
