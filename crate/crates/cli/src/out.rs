//! Output plumbing: metadata records, CSV rows, JSON reports.
//!
//! Every output file begins with a metadata record carrying the full config,
//! the seed, the tool version, and a timestamp; with identical config and
//! seed two runs differ only in the timestamp field. CSV floats are printed
//! with 17 significant digits so values round-trip exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::json;

use gnplab::Error;

pub const TOOL: &str = "gnplab";

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub timestamp: u64,
}

impl Meta {
    pub fn new(subcommand: &str, seed: u64, config: serde_json::Value) -> Self {
        Meta {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            seed,
            config,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn comment_line(&self) -> String {
        format!("# meta {}", serde_json::to_string(self).expect("meta serializes"))
    }
}

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>, Error> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?))
}

/// Writes a JSON report of the shape {"meta": ..., <payload fields>}.
pub fn write_json_report<T: Serialize>(
    path: &Path,
    meta: &Meta,
    payload: &T,
) -> Result<(), Error> {
    let mut doc = json!({ "meta": meta });
    let value = serde_json::to_value(payload).expect("payload serializes");
    if let (Some(obj), Some(extra)) = (doc.as_object_mut(), value.as_object()) {
        for (k, v) in extra {
            obj.insert(k.clone(), v.clone());
        }
    }
    let mut w = create_file(path)?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| io_err(path, e.into()))?;
    writeln!(w).map_err(|e| io_err(path, e))?;
    Ok(())
}

pub struct CsvWriter {
    path: PathBuf,
    w: BufWriter<File>,
}

impl CsvWriter {
    /// Opens the file and writes the metadata comment plus the header row.
    pub fn new(path: &Path, meta: &Meta, header: &str) -> Result<Self, Error> {
        let mut w = create_file(path)?;
        writeln!(w, "{}", meta.comment_line()).map_err(|e| io_err(path, e))?;
        writeln!(w, "{header}").map_err(|e| io_err(path, e))?;
        Ok(CsvWriter { path: path.to_path_buf(), w })
    }

    pub fn row(&mut self, line: &str) -> Result<(), Error> {
        writeln!(self.w, "{line}").map_err(|e| io_err(&self.path, e))
    }

    pub fn finish(mut self) -> Result<(), Error> {
        self.w.flush().map_err(|e| io_err(&self.path, e))
    }
}
