//! CSV ingestion and design construction.

use std::path::Path;

use breakpoint_core::linreg::LagStructure;
use breakpoint_core::Dataset;
use nalgebra::{DMatrix, DVector};

use crate::config::EstimateConfig;
use crate::error::{CliError, CliResult};

/// Minimum usable sample after lag construction.
pub const MIN_T: usize = 20;

pub const INTERCEPT: &str = "const";

/// Numeric columns of a CSV file with a header row.
#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut columns = vec![Vec::new(); headers.len()];
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            for (j, field) in rec.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    CliError::Data(format!("row {}, column '{}': '{field}' is not a number", row + 2, headers[j]))
                })?;
                if !v.is_finite() {
                    return Err(CliError::Data(format!("row {}, column '{}': non-finite value", row + 2, headers[j])));
                }
                columns[j].push(v);
            }
        }
        Ok(Self { headers, columns })
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers.iter().position(|h| h == name).map(|j| self.columns[j].as_slice())
    }
}

/// The design handed to the estimators plus the bookkeeping needed for the report.
#[derive(Debug, Clone)]
pub struct Design {
    pub dataset: Dataset,
    /// Full response column (AR(1) model only), `y_0` first.
    pub series: Vec<f64>,
    pub dropped_rows: usize,
}

fn lag_name(response: &str, j: usize) -> String {
    format!("{response}_lag{j}")
}

pub fn build_design(table: &Table, cfg: &EstimateConfig) -> CliResult<Design> {
    let y_full = table
        .column(&cfg.response)
        .ok_or_else(|| CliError::Config(format!("response column '{}' not found", cfg.response)))?;
    if matches!(cfg.model, crate::config::ModelKind::Ar1) {
        if y_full.len() < MIN_T + 1 {
            return Err(CliError::Data(format!("need at least {} observations, got {}", MIN_T + 1, y_full.len())));
        }
        let dataset = Dataset::ar1(y_full)?.with_labels(vec![lag_name(&cfg.response, 1)]);
        return Ok(Design { dataset, series: y_full.to_vec(), dropped_rows: 1 });
    }

    let n = cfg.lags;
    if y_full.len() < n + MIN_T {
        return Err(CliError::Data(format!(
            "need at least {MIN_T} observations after dropping {n} lag rows, got {}",
            y_full.len().saturating_sub(n)
        )));
    }
    let t = y_full.len() - n;
    let names: Vec<&String> = cfg.break_cols.iter().chain(&cfg.stable_cols).collect();
    let mut x = DMatrix::zeros(t, names.len());
    let mut lag_cols = Vec::new();
    for (c, name) in names.iter().enumerate() {
        if let Some(col) = table.column(name) {
            x.column_mut(c).copy_from_slice(&col[n..]);
        } else if let Some(j) = (1..=n).find(|&j| **name == lag_name(&cfg.response, j)) {
            x.column_mut(c).copy_from_slice(&y_full[n - j..y_full.len() - j]);
            lag_cols.push((c, j));
        } else if name.as_str() == INTERCEPT {
            x.column_mut(c).fill(1.0);
        } else {
            return Err(CliError::Config(format!("column '{name}' not found")));
        }
    }
    let y = DVector::from_column_slice(&y_full[n..]);
    let mut dataset = Dataset::new(y, x, (0..cfg.break_cols.len()).collect())?
        .with_labels(names.iter().map(|s| s.to_string()).collect());
    if !lag_cols.is_empty() {
        let presample = y_full[..n].iter().rev().copied().collect();
        dataset = dataset.with_lags(LagStructure { columns: lag_cols, presample });
    }
    Ok(Design { dataset, series: Vec::new(), dropped_rows: n })
}
