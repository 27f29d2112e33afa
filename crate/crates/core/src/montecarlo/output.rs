//! CSV and JSON outputs, written atomically.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{ExperimentConfig, Summary, TrialRecord};
use crate::error::Result;

pub const CSV_HEADER: [&str; 7] = ["trial", "seed", "captured", "set_size", "height", "k", "n"];

/// Per-trial CSV; the header is written even when there are no rows.
pub fn records_to_csv(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a ExperimentConfig,
    summary: &'a Summary,
}

pub fn summary_to_json(config: &ExperimentConfig, summary: &Summary) -> Result<String> {
    let env = Envelope {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config,
        summary,
    };
    Ok(serde_json::to_string_pretty(&env)?)
}

/// Writes `bytes` to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
