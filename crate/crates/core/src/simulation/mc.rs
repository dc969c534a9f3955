//! Monte Carlo harness: simulate datasets per cell, estimate the break with
//! each estimator on the same data, and summarize ρ̂.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dgp::{ar1_break_series, mean_break_series, ArBreakConfig, MeanBreakConfig};
use super::summary::{Histogram, Summary};
use crate::error::{Error, Result};
use crate::estimators::{estimate_break_ar1, CandidateScan, WeightScheme};
use crate::linreg::Dataset;
use crate::seeds;

/// Replicate failures above this share abort the run.
pub const MAX_FAILURE_SHARE: f64 = 0.01;
/// Below this many replications the report carries a warning.
pub const FULL_REPS: usize = 1000;

fn one() -> f64 {
    1.0
}

/// One design point of a simulation study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum McCell {
    /// Mean shift of size `d0/√T` after `⌊ρ₀T⌋`.
    Mean {
        #[serde(rename = "T")]
        t: usize,
        rho0: f64,
        d0: f64,
        #[serde(default)]
        mu: f64,
        #[serde(default = "one")]
        sigma: f64,
    },
    /// AR(1) with roots `exp(-μ/T)`, `exp(-(μ+δ)/T)` and `y₀ = x₀√T`.
    Ar1 {
        #[serde(rename = "T")]
        t: usize,
        rho0: f64,
        mu: f64,
        delta: f64,
        #[serde(default = "one")]
        sigma: f64,
        #[serde(default = "one")]
        x0: f64,
    },
}

impl McCell {
    pub fn t(&self) -> usize {
        match self {
            Self::Mean { t, .. } | Self::Ar1 { t, .. } => *t,
        }
    }

    pub fn rho0(&self) -> f64 {
        match self {
            Self::Mean { rho0, .. } | Self::Ar1 { rho0, .. } => *rho0,
        }
    }

    /// `k₀/T`.
    pub fn true_fraction(&self) -> f64 {
        super::dgp::break_index(self.t(), self.rho0()) as f64 / self.t() as f64
    }

    pub fn mean_config(&self, seed: u64) -> Option<MeanBreakConfig> {
        match *self {
            Self::Mean { t, rho0, d0, mu, sigma } => Some(MeanBreakConfig { t, rho0, mu, d0, sigma, seed }),
            Self::Ar1 { .. } => None,
        }
    }

    pub fn ar_config(&self, seed: u64) -> Option<ArBreakConfig> {
        match *self {
            Self::Ar1 { t, rho0, mu, delta, sigma, x0 } => Some(ArBreakConfig {
                t,
                rho0,
                mu,
                delta,
                sigma,
                y0: x0 * (t as f64).sqrt(),
                seed,
            }),
            Self::Mean { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Mean { .. } => self.mean_config(0).expect("mean cell").validate(),
            Self::Ar1 { .. } => self.ar_config(0).expect("ar cell").validate(),
        }
    }
}

/// A labelled weight scheme, e.g. `NEW` = power:0.5, `LS` = unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSpec {
    pub label: String,
    pub weight: WeightScheme,
}

impl EstimatorSpec {
    pub fn new(label: impl Into<String>, weight: WeightScheme) -> Self {
        Self { label: label.into(), weight }
    }

    /// `NEW` (power 1/2) and `LS` (unit).
    pub fn new_and_ls() -> Vec<Self> {
        vec![Self::new("NEW", WeightScheme::NEW), Self::new("LS", WeightScheme::Unit)]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct McOptions {
    /// Trimming fraction; `None` searches every `k = 1, ..., T-1`.
    pub trim: Option<f64>,
}

impl McOptions {
    fn trim_for(&self, t: usize) -> f64 {
        self.trim.unwrap_or(0.5 / t as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub cell_index: usize,
    pub cell: McCell,
    pub estimator: String,
    pub weight: String,
    pub summary: Summary,
    pub failures: usize,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub reps: usize,
    pub master_seed: u64,
    pub options: McOptions,
    pub warnings: Vec<String>,
    pub rows: Vec<McRow>,
}

impl McReport {
    pub fn row(&self, cell_index: usize, estimator: &str) -> Option<&McRow> {
        self.rows.iter().find(|r| r.cell_index == cell_index && r.estimator == estimator)
    }
}

/// Monte Carlo over `cells` searching every candidate date.
pub fn run_mc(cells: &[McCell], estimators: &[EstimatorSpec], reps: usize, master_seed: u64) -> Result<McReport> {
    run_mc_with(cells, estimators, reps, master_seed, &McOptions::default())
}

/// Replicate `r` of cell `c` draws its data from seed `derive(master_seed, [c, r])`;
/// all estimators see the same data.
pub fn run_mc_with(
    cells: &[McCell],
    estimators: &[EstimatorSpec],
    reps: usize,
    master_seed: u64,
    opts: &McOptions,
) -> Result<McReport> {
    if reps < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 replications, got {reps}")));
    }
    if estimators.is_empty() {
        return Err(Error::InvalidArgument("no estimators given".into()));
    }
    let mut warnings = Vec::new();
    if reps < FULL_REPS {
        warnings.push(format!(
            "reduced replications ({reps} < {FULL_REPS}): Monte Carlo error is larger and tolerances widen"
        ));
    }
    let mut rows = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        cell.validate()?;
        let trim = opts.trim_for(cell.t());
        let draws: Vec<Vec<Option<f64>>> = (0..reps)
            .into_par_iter()
            .map(|r| replicate(cell, estimators, trim, seeds::derive(master_seed, &[ci as u64, r as u64])))
            .collect();
        for (ei, est) in estimators.iter().enumerate() {
            let sample: Vec<f64> = draws.iter().filter_map(|d| d[ei]).collect();
            let failures = reps - sample.len();
            if failures as f64 > MAX_FAILURE_SHARE * reps as f64 {
                return Err(Error::TooManyFailures { failed: failures, total: reps, limit_pct: MAX_FAILURE_SHARE * 100.0 });
            }
            rows.push(McRow {
                cell_index: ci,
                cell: cell.clone(),
                estimator: est.label.clone(),
                weight: est.weight.to_string(),
                summary: Summary::from_sample(&sample, cell.true_fraction()),
                failures,
                histogram: Histogram::from_sample(&sample),
            });
        }
    }
    Ok(McReport { reps, master_seed, options: opts.clone(), warnings, rows })
}

fn replicate(cell: &McCell, estimators: &[EstimatorSpec], trim: f64, seed: u64) -> Vec<Option<f64>> {
    let mut rng = seeds::rng(seed);
    match cell {
        McCell::Mean { .. } => {
            let cfg = cell.mean_config(seed).expect("mean cell");
            let y = mean_break_series(&cfg, &mut rng);
            let scan = Dataset::mean_model(&y).and_then(|ds| CandidateScan::new(&ds, trim));
            match scan {
                Ok(scan) => estimators.iter().map(|e| scan.estimate(&e.weight).ok().map(|f| f.rho_hat)).collect(),
                Err(_) => vec![None; estimators.len()],
            }
        }
        McCell::Ar1 { .. } => {
            let cfg = cell.ar_config(seed).expect("ar cell");
            let y = ar1_break_series(&cfg, &mut rng);
            estimators
                .iter()
                .map(|e| estimate_break_ar1(&y, &e.weight, trim).ok().map(|f| f.rho_hat))
                .collect()
        }
    }
}
