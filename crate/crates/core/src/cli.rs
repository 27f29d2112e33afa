//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for runtime errors and
//! failed verifications.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::montecarlo::{self, output, ExperimentConfig, ExperimentKind};
use crate::rootfind::{leaf_strip, m_n, Algorithm};
use crate::treegen::{generate_rrt, IncreasingTree, Tree, UnrootedTree};
use crate::ulam::{embed_phi, flip_tree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

const DEFAULT_EPSILON_GRID: [f64; 4] = [0.2, 0.1, 0.05, 0.02];

#[derive(Debug, Parser)]
#[command(name = "leafstrip", version, about = "Root confidence sets for random recursive trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a uniform attachment tree and write it as an edge list.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strip leaves from a tree and print the surviving labels.
    Strip {
        /// Edge-list file, or `-` for standard input.
        input: PathBuf,
        /// Strip m_n - k rounds.
        #[arg(long, conflicts_with = "rounds")]
        k: Option<u32>,
        /// Strip exactly this many rounds.
        #[arg(long)]
        rounds: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Lines)]
        format: Format,
    },
    /// Print the Ulam-Harris embedding of an increasing tree.
    Embed {
        /// Edge-list file (parent first), or `-` for standard input.
        input: PathBuf,
    },
    /// Apply the zone-flipping involution and write the resulting tree.
    Flip {
        input: PathBuf,
        /// Flip depth j >= 2.
        #[arg(long, conflicts_with = "k")]
        j: Option<u32>,
        /// Shorthand for j = 4k.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment.
    Experiment(ExperimentArgs),
    /// Verify the flip properties (same as `experiment --kind verify`).
    Verify(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// One label per line.
    Lines,
    /// A JSON array.
    Json,
}

#[derive(Debug, Default, Args)]
pub struct ExperimentArgs {
    /// detection | size | height | uniformity | tradeoff | verify
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// k values: `a:b` (inclusive), `a,b,c` or a single value.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// leafstrip | jordan | greedy
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Output prefix; writes `<out>.csv` and `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Comma-separated epsilon values for the tradeoff table.
    #[arg(long = "epsilon-grid")]
    pub epsilon_grid: Option<String>,
    /// Verify over every increasing tree up to --n-max.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Flat `key = value` file mirroring the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parses `2:12`, `1,3,5` or `4`.
pub fn parse_k_values(text: &str) -> std::result::Result<Vec<u32>, String> {
    let text = text.trim();
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| format!("bad k value {s:?}"));
    if let Some((a, b)) = text.split_once(':') {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty k range {text:?}"));
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(num).collect()
}

fn parse_epsilons(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad epsilon {s:?}")))
        .collect()
}

/// Reads a flat `key = value` file; `#` starts a comment line.
pub fn parse_config_file(text: &str) -> std::result::Result<HashMap<String, String>, String> {
    let mut out = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        const KNOWN: [&str; 11] =
            ["kind", "n", "k", "trials", "seed", "algorithm", "out", "threads", "epsilon-grid", "exhaustive", "n-max"];
        if !KNOWN.contains(&key.as_str()) {
            return Err(format!("line {}: unknown key {key:?}", i + 1));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

pub struct ResolvedExperiment {
    pub config: ExperimentConfig,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

fn parse_field<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
}

/// Merges flags over the optional config file and validates the result.
pub fn resolve_experiment(args: &ExperimentArgs, forced_kind: Option<ExperimentKind>) -> CliResult<ResolvedExperiment> {
    let file = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            parse_config_file(&text).map_err(CliError::Usage)?
        }
        None => HashMap::new(),
    };
    let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());

    let kind = match forced_kind {
        Some(k) => k,
        None => match pick(args.kind.clone(), "kind") {
            Some(s) => s.parse::<ExperimentKind>().map_err(|e| CliError::Usage(e.to_string()))?,
            None => return usage("missing --kind"),
        },
    };
    let exhaustive = args.exhaustive
        || match file.get("exhaustive") {
            Some(v) => parse_field::<bool>("exhaustive", v)?,
            None => false,
        };
    let exhaustive_verify = kind == ExperimentKind::LemmaVerify && exhaustive;

    let n = match pick(args.n.map(|v| v.to_string()), "n") {
        Some(v) => parse_field::<usize>("--n", &v)?,
        None if exhaustive_verify => 0,
        None => return usage("missing --n"),
    };
    let trials = match pick(args.trials.map(|v| v.to_string()), "trials") {
        Some(v) => parse_field::<u64>("--trials", &v)?,
        None if exhaustive_verify => 0,
        None => return usage("missing --trials"),
    };
    let seed = match pick(args.seed.map(|v| v.to_string()), "seed") {
        Some(v) => parse_field::<u64>("--seed", &v)?,
        None => 0,
    };
    let k_values = match pick(args.k.clone(), "k") {
        Some(v) => parse_k_values(&v).map_err(CliError::Usage)?,
        None if kind == ExperimentKind::LemmaVerify => vec![1],
        None if matches!(kind, ExperimentKind::Height | ExperimentKind::Uniformity) => Vec::new(),
        None => return usage("missing --k"),
    };
    let algorithm = match pick(args.algorithm.clone(), "algorithm") {
        Some(v) => v.parse::<Algorithm>().map_err(|e| CliError::Usage(e.to_string()))?,
        None => Algorithm::LeafStrip,
    };
    let epsilon_grid = match pick(args.epsilon_grid.clone(), "epsilon-grid") {
        Some(v) => parse_epsilons(&v).map_err(CliError::Usage)?,
        None if kind == ExperimentKind::Tradeoff => DEFAULT_EPSILON_GRID.to_vec(),
        None => Vec::new(),
    };
    let n_max = match pick(args.n_max.map(|v| v.to_string()), "n-max") {
        Some(v) => parse_field::<usize>("--n-max", &v)?,
        None => 7,
    };
    let threads = match pick(args.threads.map(|v| v.to_string()), "threads") {
        Some(v) => Some(parse_field::<usize>("--threads", &v)?),
        None => None,
    };
    if threads == Some(0) {
        return usage("--threads must be at least 1");
    }
    let out = pick(args.out.as_ref().map(|p| p.display().to_string()), "out").map(PathBuf::from);

    let config = ExperimentConfig {
        kind,
        n,
        k_values,
        trials,
        master_seed: seed,
        algorithm,
        epsilon_grid,
        exhaustive,
        n_max,
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(ResolvedExperiment { config, threads, out })
}

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn run_experiment(args: &ExperimentArgs, forced: Option<ExperimentKind>, stdout: &mut dyn Write) -> CliResult<i32> {
    let resolved = resolve_experiment(args, forced)?;
    let result = montecarlo::run(&resolved.config, resolved.threads)?;
    let json = output::summary_to_json(&resolved.config, &result.summary)?;
    match &resolved.out {
        Some(prefix) => {
            output::write_atomic(&with_extension(prefix, "csv"), &output::records_to_csv(&result.records)?)?;
            output::write_atomic(&with_extension(prefix, "json"), json.as_bytes())?;
            if !result.summary.passed() {
                writeln!(stdout, "{json}")?;
            }
        }
        None => writeln!(stdout, "{json}")?,
    }
    Ok(if result.summary.passed() { EXIT_OK } else { EXIT_FAILURE })
}

/// Executes a parsed command.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Generate { n, seed, out } => {
            if n == 0 {
                return usage("--n must be at least 1");
            }
            let t = generate_rrt(n, seed)?;
            match out {
                Some(p) => output::write_atomic(&p, t.to_edge_list().as_bytes())?,
                None => stdout.write_all(t.to_edge_list().as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Strip { input, k, rounds, format } => {
            let rounds_given = match (k, rounds) {
                (None, None) => return usage("give exactly one of --k or --rounds"),
                (Some(_), Some(_)) => return usage("--k and --rounds are mutually exclusive"),
                (_, Some(r)) => Some(r),
                (Some(_), None) => None,
            };
            let tree = UnrootedTree::parse_edge_list(&read_input(&input)?)?;
            let r = rounds_given.unwrap_or_else(|| m_n(tree.vertex_count()).saturating_sub(k.unwrap_or(0)));
            let set = leaf_strip(&tree, r);
            match format {
                Format::Lines => {
                    for v in &set.vertices {
                        writeln!(stdout, "{v}")?;
                    }
                }
                Format::Json => writeln!(stdout, "{}", serde_json::to_string(&set.vertices).map_err(Error::from)?)?,
            }
            Ok(EXIT_OK)
        }
        Command::Embed { input } => {
            let tree = IncreasingTree::parse_edge_list(&read_input(&input)?)?;
            stdout.write_all(embed_phi(&tree).dump().as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Flip { input, j, k, out } => {
            let depth = match (j, k) {
                (Some(j), None) => j,
                (None, Some(k)) if k >= 1 => 4 * k,
                (None, Some(_)) => return usage("--k must be at least 1"),
                _ => return usage("give exactly one of --j or --k"),
            };
            if depth < 2 {
                return usage("--j must be at least 2");
            }
            let tree = IncreasingTree::parse_edge_list(&read_input(&input)?)?;
            let flipped = flip_tree(&tree, depth)?;
            match out {
                Some(p) => output::write_atomic(&p, flipped.to_edge_list().as_bytes())?,
                None => stdout.write_all(flipped.to_edge_list().as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Experiment(args) => run_experiment(&args, None, stdout),
        Command::Verify(args) => run_experiment(&args, Some(ExperimentKind::LemmaVerify), stdout),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run_from_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}
