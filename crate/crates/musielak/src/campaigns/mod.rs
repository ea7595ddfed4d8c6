//! The six campaigns and the code that writes their output.
//!
//! Instances run in parallel on the current rayon pool; results are
//! collected in instance order, so reports do not depend on the number of
//! threads.

mod construct;
mod embed;
mod oracles;
mod roundtrip;
mod verify;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{Command, ExperimentConfig, Format};
use crate::io::{ensure_dir, write_csv, write_json};
use crate::report::{Band, CheckOutcome, Report, Row};
use crate::Result;

pub use oracles::brute_force_matrix_norm;

/// A CSV file: name without extension, header, formatted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn from_rows(name: impl Into<String>, rows: &[Row]) -> Self {
        Self {
            name: name.into(),
            header: Row::HEADER.to_vec(),
            rows: rows.iter().map(Row::cells).collect(),
        }
    }
}

/// Everything a campaign produces besides the report header.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub checks: Vec<CheckOutcome>,
    pub bands: Vec<Band>,
    pub rows: Vec<Row>,
    pub details: serde_json::Value,
    /// Extra JSON files (name without extension, content).
    pub artifacts: Vec<(String, serde_json::Value)>,
    pub tables: Vec<Table>,
}

/// Validates the config and runs its command.
pub fn run(config: &ExperimentConfig) -> Result<(Report, Outcome)> {
    config.validate()?;
    let command = config.command()?;
    let mut outcome = match command {
        Command::Construct => construct::run(config)?,
        Command::VerifyThm1 | Command::VerifyThm2 => verify::run(config, command)?,
        Command::Roundtrip => roundtrip::run(config)?,
        Command::LemmaOracles => oracles::run(config)?,
        Command::EmbedReport => embed::run(config)?,
    };
    if outcome.tables.is_empty() {
        outcome
            .tables
            .push(Table::from_rows(command.name(), &outcome.rows));
    }
    let report = Report::new(
        config.clone(),
        command,
        outcome.checks.clone(),
        outcome.bands.clone(),
        outcome.details.clone(),
    );
    Ok((report, outcome))
}

/// Writes `<command>.json`, the CSV tables and any artifacts into `dir`.
pub fn write_outputs(
    report: &Report,
    outcome: &Outcome,
    dir: &Path,
    format: Format,
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    if format.json() {
        let path = dir.join(format!("{}.json", report.command));
        write_json(&path, report)?;
        written.push(path);
        for (name, value) in &outcome.artifacts {
            let path = dir.join(format!("{name}.json"));
            write_json(&path, value)?;
            written.push(path);
        }
    }
    if format.csv() {
        for t in &outcome.tables {
            let path = dir.join(format!("{}.csv", t.name));
            write_csv(&path, &t.header, t.rows.iter().cloned())?;
            written.push(path);
        }
    }
    Ok(written)
}

pub(crate) fn instance_id(n: usize, i: usize) -> String {
    format!("n{n}-i{i:04}")
}

/// Runs `f(n, i)` for every dimension and `i < count`, in parallel, and
/// returns the results in sweep order.
pub(crate) fn par_instances<T: Send>(
    dims: &[usize],
    count: usize,
    f: impl Fn(usize, usize) -> Result<T> + Sync,
) -> Result<Vec<(usize, usize, T)>> {
    let jobs: Vec<(usize, usize)> = dims
        .iter()
        .flat_map(|&n| (0..count).map(move |i| (n, i)))
        .collect();
    jobs.into_par_iter()
        .map(|(n, i)| f(n, i).map(|t| (n, i, t)))
        .collect()
}

/// Campaign tags that separate random streams.
pub(crate) mod tag {
    pub const CONSTRUCT: u8 = 1;
    pub const THM1: u8 = 2;
    pub const THM2: u8 = 3;
    pub const ROUNDTRIP: u8 = 4;
    pub const EMBED: u8 = 5;
    /// Oracle checks use `ORACLES + index`.
    pub const ORACLES: u8 = 16;
}
