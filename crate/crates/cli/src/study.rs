//! `simulate` and `infill`: tables of RMSE, bias and standard error per cell and estimator.

use std::path::Path;

use breakpoint_core::seeds;
use breakpoint_core::simulation::{
    infill_ar_limit, infill_large_break_limit, infill_mean_limit, run_mc_with, ArLimitConfig, McCell,
    McOptions, Summary, FULL_REPS,
};
use serde::Serialize;

use crate::config::{estimators_of, InfillCell, InfillConfig, SimulateConfig, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output;

const MIN_REPS: usize = 100;
/// Histogram of the large-break limit: bins of this width on `[-LARGE_BREAK_RANGE, LARGE_BREAK_RANGE]`.
const LARGE_BREAK_BIN: f64 = 0.5;
const LARGE_BREAK_RANGE: f64 = 30.0;

#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub cell: usize,
    pub estimator: String,
    pub weight: String,
    pub summary: Summary,
    pub failures: usize,
    #[serde(skip)]
    pub bins: Vec<(f64, f64, u64)>,
}

#[derive(Debug, Serialize)]
pub struct StudyReport<C> {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: C,
    pub warnings: Vec<String>,
    pub rows: Vec<StudyRow>,
    /// Cell description columns of the table, one entry per cell.
    #[serde(skip)]
    pub cell_columns: Vec<(&'static str, Vec<String>)>,
}

fn check_reps(reps: usize) -> CliResult<Vec<String>> {
    if reps < MIN_REPS {
        return Err(CliError::Config(format!("reps must be at least {MIN_REPS}, got {reps}")));
    }
    let mut warnings = Vec::new();
    if reps < FULL_REPS {
        warnings.push(format!(
            "reduced replications ({reps} < {FULL_REPS}): Monte Carlo error is larger and tolerances widen"
        ));
    }
    Ok(warnings)
}

fn num(v: f64) -> String {
    v.to_string()
}

pub fn simulate(cfg: &SimulateConfig) -> CliResult<StudyReport<SimulateConfig>> {
    if cfg.cells.is_empty() {
        return Err(CliError::Config("no cells configured".into()));
    }
    let warnings = check_reps(cfg.reps)?;
    let opts = McOptions { trim: cfg.trim };
    let report = run_mc_with(&cfg.cells, &estimators_of(&cfg.estimators), cfg.reps, cfg.seed, &opts)?;
    let rows = report
        .rows
        .iter()
        .map(|r| StudyRow {
            cell: r.cell_index,
            estimator: r.estimator.clone(),
            weight: r.weight.clone(),
            summary: r.summary,
            failures: r.failures,
            bins: r.histogram.bins().collect(),
        })
        .collect();

    let mut cols: Vec<(&'static str, Vec<String>)> =
        ["model", "T", "rho0", "d0", "beta1", "beta2", "mu", "delta", "x0"].iter().map(|n| (*n, Vec::new())).collect();
    for cell in &cfg.cells {
        let vals: [String; 9] = match cell {
            McCell::Mean { t, rho0, d0, mu, .. } => [
                "mean".into(),
                t.to_string(),
                num(*rho0),
                num(*d0),
                String::new(),
                String::new(),
                num(*mu),
                String::new(),
                String::new(),
            ],
            McCell::Ar1 { t, rho0, mu, delta, x0, .. } => {
                let (b1, b2) = cell.ar_config(0).expect("ar cell").betas();
                [
                    "ar1".into(),
                    t.to_string(),
                    num(*rho0),
                    String::new(),
                    num(b1),
                    num(b2),
                    num(*mu),
                    num(*delta),
                    num(*x0),
                ]
            }
        };
        for (c, v) in cols.iter_mut().zip(vals) {
            c.1.push(v);
        }
    }
    Ok(StudyReport { schema_version: SCHEMA_VERSION, command: "simulate", config: cfg.clone(), warnings, rows, cell_columns: cols })
}

pub fn infill(cfg: &InfillConfig) -> CliResult<StudyReport<InfillConfig>> {
    if cfg.cells.is_empty() {
        return Err(CliError::Config("no cells configured".into()));
    }
    let warnings = check_reps(cfg.reps)?;
    let estimators = estimators_of(&cfg.estimators);
    let mut rows = Vec::new();
    let mut cols: Vec<(&'static str, Vec<String>)> =
        ["model", "rho0", "d0", "mu", "delta", "j0"].iter().map(|n| (*n, Vec::new())).collect();
    for (ci, cell) in cfg.cells.iter().enumerate() {
        let seed = seeds::derive(cfg.seed, &[ci as u64]);
        let blank = String::new;
        let vals: [String; 6] = match cell {
            InfillCell::Mean { rho0, d0 } => {
                for e in &estimators {
                    let s = infill_mean_limit(*rho0, *d0, &e.weight, cfg.grid_n, cfg.reps, seed)?;
                    rows.push(row(ci, &e.label, e.weight.to_string(), s.summary(), s.histogram().bins().collect()));
                }
                ["mean".into(), num(*rho0), num(*d0), blank(), blank(), blank()]
            }
            InfillCell::Ar1 { rho0, mu, delta, j0 } => {
                let ar = ArLimitConfig { rho0: *rho0, mu: *mu, delta: *delta, j0: *j0 };
                for e in &estimators {
                    let s = infill_ar_limit(&ar, &e.weight, cfg.grid_h, cfg.reps, seed)?;
                    rows.push(row(ci, &e.label, e.weight.to_string(), s.summary(), s.histogram().bins().collect()));
                }
                ["ar1".into(), num(*rho0), blank(), num(*mu), num(*delta), num(*j0)]
            }
            InfillCell::LargeBreak => {
                let draws = infill_large_break_limit(cfg.reps, seed);
                let bins = symmetric_bins(&draws, LARGE_BREAK_BIN, LARGE_BREAK_RANGE);
                rows.push(row(ci, "argmax", "none".into(), Summary::from_sample(&draws, 0.0), bins));
                ["large_break".into(), blank(), blank(), blank(), blank(), blank()]
            }
        };
        for (c, v) in cols.iter_mut().zip(vals) {
            c.1.push(v);
        }
    }
    Ok(StudyReport { schema_version: SCHEMA_VERSION, command: "infill", config: cfg.clone(), warnings, rows, cell_columns: cols })
}

fn row(cell: usize, label: &str, weight: String, summary: Summary, bins: Vec<(f64, f64, u64)>) -> StudyRow {
    StudyRow { cell, estimator: label.to_owned(), weight, summary, failures: 0, bins }
}

/// Bins of `width` on `[-range, range]`; draws outside land in the end bins.
fn symmetric_bins(draws: &[f64], width: f64, range: f64) -> Vec<(f64, f64, u64)> {
    let n = (2.0 * range / width).round() as usize;
    let mut counts = vec![0u64; n];
    for d in draws {
        let i = ((d + range) / width).floor().clamp(0.0, (n - 1) as f64) as usize;
        counts[i] += 1;
    }
    counts.into_iter().enumerate().map(|(i, c)| (-range + i as f64 * width, -range + (i + 1) as f64 * width, c)).collect()
}

/// Writes the table at `<out>.csv`, the report at `<out>.json` and one histogram
/// per cell and estimator under `<out>_hist/`.
pub fn write<C: Serialize>(report: &StudyReport<C>, out: &Path) -> CliResult<()> {
    let table = out.with_extension("csv");
    let mut labels: Vec<&str> = Vec::new();
    for r in &report.rows {
        if !labels.contains(&r.estimator.as_str()) {
            labels.push(&r.estimator);
        }
    }
    let mut header = vec!["cell".to_string()];
    header.extend(report.cell_columns.iter().map(|c| c.0.to_string()));
    for l in &labels {
        header.extend(["rmse", "bias", "stderr"].iter().map(|s| format!("{s}_{l}")));
    }
    header.push("reps".into());

    let ncells = report.cell_columns.first().map_or(0, |c| c.1.len());
    let mut w = output::csv_writer(&table)?;
    w.write_record(&header).map_err(|e| output::csv_err(&table, e))?;
    for cell in 0..ncells {
        let mut rec = vec![cell.to_string()];
        rec.extend(report.cell_columns.iter().map(|c| c.1[cell].clone()));
        let mut n = 0;
        for l in &labels {
            match report.rows.iter().find(|r| r.cell == cell && r.estimator == *l) {
                Some(r) => {
                    n = n.max(r.summary.n + r.failures);
                    rec.extend([num(r.summary.rmse), num(r.summary.bias), num(r.summary.stderr)]);
                }
                None => rec.extend([String::new(), String::new(), String::new()]),
            }
        }
        rec.push(n.to_string());
        w.write_record(&rec).map_err(|e| output::csv_err(&table, e))?;
    }
    w.flush().map_err(|e| CliError::output(&table, e))?;

    output::write_json(&out.with_extension("json"), report)?;
    let dir = output::histogram_dir(out);
    for r in &report.rows {
        let path = dir.join(format!("cell{}_{}.csv", r.cell, r.estimator));
        output::write_histogram(&path, r.bins.iter().copied())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_bins_cover_the_sample() {
        let bins = symmetric_bins(&[-100.0, -0.1, 0.0, 0.2, 29.9, 50.0], 0.5, 30.0);
        assert_eq!(bins.len(), 120);
        assert_eq!(bins.iter().map(|b| b.2).sum::<u64>(), 6);
        assert_eq!(bins[0].2, 1);
        assert_eq!(bins[59].2, 1);
        assert_eq!(bins[60].2, 2);
        assert_eq!(bins[119].2, 2);
    }
}
