use std::path::Path;

use breakpoint_core::estimators::{estimate_break_ar1, Direction, Method};
use breakpoint_core::inference::{analytic_ci, bootstrap_ci, estimate_delta, ConfidenceInterval, UEstimator};
use breakpoint_core::{estimate_break, BreakFit, WeightScheme};
use serde::Serialize;

use crate::config::{CiSpec, EstimateConfig, ModelKind, SCHEMA_VERSION};
use crate::data::{build_design, Design, Table};
use crate::error::{CliError, CliResult};
use crate::output;

#[derive(Debug, Serialize)]
pub struct FitSummary {
    pub weight: String,
    pub method: Method,
    pub direction: Direction,
    pub k_hat: usize,
    pub rho_hat: f64,
    pub objective: Option<f64>,
}

impl From<&BreakFit> for FitSummary {
    fn from(f: &BreakFit) -> Self {
        Self {
            weight: f.weight.to_string(),
            method: f.method,
            direction: f.direction,
            k_hat: f.k_hat,
            rho_hat: f.rho_hat,
            objective: f.objective_at(f.k_hat),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Serialize)]
pub struct DeltaSummary {
    pub k: usize,
    pub u_estimator: UEstimator,
    pub sigma2: f64,
    pub coefficients: Vec<Coefficient>,
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    pub rho: f64,
    pub q_new: Option<f64>,
    pub v_ls: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: EstimateConfig,
    pub rows_read: usize,
    pub dropped_rows: usize,
    pub t: usize,
    pub new: FitSummary,
    pub ls: FitSummary,
    pub delta: DeltaSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<ConfidenceInterval>,
    pub curve: Vec<CurvePoint>,
}

fn fit_pair(design: &Design, cfg: &EstimateConfig) -> CliResult<(BreakFit, BreakFit)> {
    let w = cfg.weight.scheme();
    Ok(match cfg.model {
        ModelKind::Regression => (
            estimate_break(&design.dataset, w, cfg.trim)?,
            estimate_break(&design.dataset, &WeightScheme::Unit, cfg.trim)?,
        ),
        ModelKind::Ar1 => (
            estimate_break_ar1(&design.series, w, cfg.trim)?,
            estimate_break_ar1(&design.series, &WeightScheme::Unit, cfg.trim)?,
        ),
    })
}

pub fn run(command: &'static str, cfg: &EstimateConfig) -> CliResult<EstimateReport> {
    cfg.validate()?;
    let input = cfg.input.as_deref().expect("validated");
    let table = Table::read(input)?;
    let design = build_design(&table, cfg)?;
    let ds = &design.dataset;
    let (new, ls) = fit_pair(&design, cfg)?;

    let u = cfg.delta_cov.estimator(ds.t());
    let de = estimate_delta(ds, &new, u)?;
    let se = de.std_errors();
    let names = ds.labels().map(|l| l.to_vec()).unwrap_or_default();
    let coefficients = ds
        .break_cols()
        .iter()
        .enumerate()
        .map(|(j, &c)| Coefficient {
            name: names.get(c).cloned().unwrap_or_else(|| format!("z{j}")),
            estimate: de.delta_hat[j],
            std_error: se[j],
        })
        .collect();

    let ci = match cfg.ci {
        CiSpec::None => None,
        CiSpec::Analytic => Some(analytic_ci(ds, &new, &de, cfg.level)?),
        CiSpec::Bootstrap { method, replications } => {
            Some(bootstrap_ci(ds, &new, method, replications, cfg.level, cfg.seed)?)
        }
    };

    let t = new.t;
    let curve = new
        .curve_points()
        .map(|(k, q)| CurvePoint { k, rho: k as f64 / t as f64, q_new: q, v_ls: ls.objective_at(k) })
        .collect();

    Ok(EstimateReport {
        schema_version: SCHEMA_VERSION,
        command,
        config: cfg.clone(),
        rows_read: table.rows(),
        dropped_rows: design.dropped_rows,
        t,
        new: FitSummary::from(&new),
        ls: FitSummary::from(&ls),
        delta: DeltaSummary { k: de.k, u_estimator: de.u_estimator, sigma2: de.sigma2, coefficients },
        ci,
        curve,
    })
}

/// `.csv` writes the objective curves and the JSON report next to it; anything else gets the JSON report.
pub fn write(report: &EstimateReport, out: &Path) -> CliResult<()> {
    if output::is_csv(out) {
        let mut w = output::csv_writer(out)?;
        w.write_record(["k", "rho", "q_new", "v_ls"]).map_err(|e| output::csv_err(out, e))?;
        for p in &report.curve {
            w.write_record([
                p.k.to_string(),
                p.rho.to_string(),
                output::opt(p.q_new),
                output::opt(p.v_ls),
            ])
            .map_err(|e| output::csv_err(out, e))?;
        }
        w.flush().map_err(|e| CliError::output(out, e))?;
        output::write_json(&out.with_extension("json"), report)
    } else {
        output::write_json(out, report)
    }
}
