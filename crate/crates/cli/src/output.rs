//! Deterministic file output: `<command>.json` always, `<command>.csv` for
//! series, traces and sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use gempl_core::Tabular;

use crate::commands::ResultEnvelope;
use crate::error::CliError;

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

/// Nine significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn csv_string(table: &dyn Tabular) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_io = |e: csv::Error| CliError::Io { path: "<csv>".into(), source: e.into() };
    w.write_record(table.columns()).map_err(to_io)?;
    for row in table.rows() {
        w.write_record(row.iter().map(|x| format_value(*x))).map_err(to_io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io { path: "<csv>".into(), source: e.into_error() })?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII numbers and names is UTF-8"))
}

/// Write the envelope under `dir`, creating it if needed. Returns the paths
/// written, JSON first.
pub fn write_outputs(envelope: &ResultEnvelope, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let stem = envelope.command.name();
    let json_path = dir.join(format!("{stem}.json"));
    let mut json = serde_json::to_string_pretty(envelope).map_err(|e| CliError::Io {
        path: json_path.display().to_string(),
        source: e.into(),
    })?;
    json.push('\n');
    fs::write(&json_path, json).map_err(io_error(&json_path))?;
    let mut written = vec![json_path];
    if let Some(table) = envelope.outputs.table() {
        let csv_path = dir.join(format!("{stem}.csv"));
        fs::write(&csv_path, csv_string(table)?).map_err(io_error(&csv_path))?;
        written.push(csv_path);
    }
    Ok(written)
}
