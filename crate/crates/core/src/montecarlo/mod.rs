//! Seeded, parallel Monte Carlo experiments.
//!
//! Trial `i` of a run draws its tree from the stream seeded by
//! [`derive_seed`]`(master_seed, i)`. Trials run in parallel on a dedicated
//! thread pool and are reduced in trial order, so the records and summaries
//! of a run do not depend on the number of threads.

mod height;
mod lemma;
pub mod output;
pub mod stats;
mod sweep;
mod uniformity;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::rootfind::Algorithm;

pub use height::{run_height, HeightSummary, TailRow};
pub use lemma::{run_lemma_verify, LemmaFailure, LemmaReport, PropertyTally};
pub use sweep::{
    exact_sweep, run_detection, run_size, run_sweep, run_tradeoff, EpsilonRow, ExactStats, SummaryStats, SweepReport,
    TradeoffReport,
};
pub use uniformity::{run_uniformity, uniformity_exact, UniformityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Detection,
    Size,
    Height,
    Uniformity,
    Tradeoff,
    LemmaVerify,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Detection => "detection",
            ExperimentKind::Size => "size",
            ExperimentKind::Height => "height",
            ExperimentKind::Uniformity => "uniformity",
            ExperimentKind::Tradeoff => "tradeoff",
            ExperimentKind::LemmaVerify => "lemma-verify",
        }
    }

    fn needs_k(self) -> bool {
        matches!(self, ExperimentKind::Detection | ExperimentKind::Size | ExperimentKind::Tradeoff)
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "detection" => ExperimentKind::Detection,
            "size" => ExperimentKind::Size,
            "height" => ExperimentKind::Height,
            "uniformity" => ExperimentKind::Uniformity,
            "tradeoff" => ExperimentKind::Tradeoff,
            "lemma-verify" | "verify" => ExperimentKind::LemmaVerify,
            other => return Err(Error::Config(format!("unknown experiment kind {other:?}"))),
        })
    }
}

/// Full description of a run. Thread count is deliberately not part of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub k_values: Vec<u32>,
    pub trials: u64,
    pub master_seed: u64,
    pub algorithm: Algorithm,
    pub epsilon_grid: Vec<f64>,
    /// Lemma verification over every increasing tree with `n <= n_max`
    /// instead of sampled trees.
    pub exhaustive: bool,
    pub n_max: usize,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, n: usize, k_values: Vec<u32>, trials: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            kind,
            n,
            k_values,
            trials,
            master_seed,
            algorithm: Algorithm::LeafStrip,
            epsilon_grid: Vec::new(),
            exhaustive: false,
            n_max: 7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.kind == ExperimentKind::LemmaVerify && self.exhaustive {
            if self.n_max == 0 {
                return bad("n_max must be at least 1".into());
            }
        } else {
            if self.n == 0 {
                return bad("n must be at least 1".into());
            }
            if self.trials == 0 {
                return bad("trials must be at least 1".into());
            }
        }
        if self.kind.needs_k() && self.k_values.is_empty() {
            return bad(format!("{} needs at least one k value", self.kind.as_str()));
        }
        if self.kind == ExperimentKind::LemmaVerify && self.k_values.contains(&0) {
            return bad("lemma verification needs k >= 1".into());
        }
        if self.kind == ExperimentKind::Uniformity && self.n < 2 {
            return bad("uniformity needs n >= 2".into());
        }
        if let Some(e) = self.epsilon_grid.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return bad(format!("epsilon {e} outside (0, 1]"));
        }
        Ok(())
    }
}

/// One row of the per-trial CSV. Columns that do not apply to an experiment
/// are left empty. For uniformity runs `set_size` holds the size of the
/// subtree of vertex 2; for lemma verification `captured` holds the pass flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: Option<u64>,
    pub captured: Option<bool>,
    pub set_size: Option<u64>,
    pub height: Option<u32>,
    pub k: Option<u32>,
    pub n: usize,
}

/// What a run produced.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Summary {
    Detection(SweepReport),
    Size(SweepReport),
    Height(HeightSummary),
    Uniformity(UniformityReport),
    Tradeoff(TradeoffReport),
    LemmaVerify(LemmaReport),
}

impl Summary {
    /// `false` only for a lemma verification that found a violation.
    pub fn passed(&self) -> bool {
        match self {
            Summary::LemmaVerify(r) => r.passed,
            _ => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

/// Runs the experiment selected by `config.kind` on `threads` worker threads
/// (`None` for the machine's parallelism).
pub fn run(config: &ExperimentConfig, threads: Option<usize>) -> Result<RunOutput> {
    config.validate()?;
    let pool = thread_pool(threads)?;
    pool.install(|| match config.kind {
        ExperimentKind::Detection => {
            let (records, report) = run_detection(config)?;
            Ok(RunOutput { records, summary: Summary::Detection(report) })
        }
        ExperimentKind::Size => {
            let (records, report) = run_size(config)?;
            Ok(RunOutput { records, summary: Summary::Size(report) })
        }
        ExperimentKind::Height => {
            let (records, report) = run_height(config)?;
            Ok(RunOutput { records, summary: Summary::Height(report) })
        }
        ExperimentKind::Uniformity => {
            let (records, report) = run_uniformity(config)?;
            Ok(RunOutput { records, summary: Summary::Uniformity(report) })
        }
        ExperimentKind::Tradeoff => {
            let (records, report) = run_tradeoff(config)?;
            Ok(RunOutput { records, summary: Summary::Tradeoff(report) })
        }
        ExperimentKind::LemmaVerify => {
            let (records, report) = run_lemma_verify(config)?;
            Ok(RunOutput { records, summary: Summary::LemmaVerify(report) })
        }
    })
}

pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))
}

/// Maps every trial index through `f` in parallel, returning results in index
/// order. `f` receives the index and its derived seed.
pub(crate) fn par_trials<T, F>(master_seed: u64, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    use rayon::prelude::*;
    (0..trials)
        .into_par_iter()
        .map(|i| f(i, derive_seed(master_seed, i)))
        .collect()
}
