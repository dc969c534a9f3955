use std::fs::File;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_writer(path: &Path) -> CliResult<csv::Writer<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
    }
    csv::Writer::from_path(path).map_err(|e| csv_err(path, e))
}

pub fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::output(path, std::io::Error::other(e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::output(path, e))
}

/// `<dir>/<stem>_hist/`, next to `out`.
pub fn histogram_dir(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    out.with_file_name(format!("{stem}_hist"))
}

/// Rounds away representation noise such as `0.07000000000000001`.
pub fn tidy(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

pub fn write_histogram(path: &Path, bins: impl Iterator<Item = (f64, f64, u64)>) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["bin_lo", "bin_hi", "count"]).map_err(|e| csv_err(path, e))?;
    for (lo, hi, c) in bins {
        w.write_record([tidy(lo).to_string(), tidy(hi).to_string(), c.to_string()]).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::output(path, e))
}
