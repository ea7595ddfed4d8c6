//! JSON and CSV files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use musielak_core::{MusielakSystem, WeightMatrix};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Error, Result};

/// Floats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let io = |e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    w.write_all(b"\n").map_err(io)?;
    w.flush().map_err(io)
}

/// `{"n": …, "N": …, "rows": [[…], …]}`; invalid rows are reported with
/// their index.
pub fn read_matrix(path: &Path) -> Result<WeightMatrix> {
    read_json(path)
}

pub fn read_system(path: &Path) -> Result<MusielakSystem> {
    read_json(path)
}

/// Writes a header and rows of preformatted cells.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
