//! Bootstrap intervals for the break date: residual (iid, centered), wild
//! (Rademacher multipliers) and recursive AR (lagged responses rebuilt from
//! the presample).

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::argmax::quantile_index;
use super::ci::{CiMethod, ConfidenceInterval};
use crate::error::{Error, Result};
use crate::estimators::{estimate_break, estimate_break_ar1_with, BreakFit, Model};
use crate::linreg::{ols_fit, Dataset};
use crate::seeds;

/// Share of failed replicates above which the interval is not reported.
pub const MAX_FAILURE_SHARE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapMethod {
    Residual,
    Wild,
    RecursiveAr,
}

impl BootstrapMethod {
    fn ci_method(self) -> CiMethod {
        match self {
            Self::Residual => CiMethod::ResidualBootstrap,
            Self::Wild => CiMethod::WildBootstrap,
            Self::RecursiveAr => CiMethod::RecursiveBootstrapAr,
        }
    }
}

/// Bootstrap errors for one replicate. Residual and recursive draws resample
/// the centered residuals with replacement; wild draws flip the sign of each
/// residual with probability 1/2.
pub fn draw_errors<R: Rng + ?Sized>(method: BootstrapMethod, residuals: &[f64], rng: &mut R) -> Vec<f64> {
    let n = residuals.len();
    match method {
        BootstrapMethod::Wild => residuals
            .iter()
            .map(|e| if rng.random::<bool>() { *e } else { -*e })
            .collect(),
        BootstrapMethod::Residual | BootstrapMethod::RecursiveAr => {
            let mean = residuals.iter().sum::<f64>() / n as f64;
            (0..n).map(|_| residuals[rng.random_range(0..n)] - mean).collect()
        }
    }
}

/// Fitted break model at `k`: coefficients per observation and residuals.
struct BreakModel {
    /// `(β, δ)` for the augmented design `[X | Z_k]`.
    beta: DVector<f64>,
    delta: DVector<f64>,
    residuals: Vec<f64>,
}

fn fit_break_model(ds: &Dataset, k: usize) -> Result<BreakModel> {
    let (t, p, q) = (ds.t(), ds.p(), ds.q());
    let mut w = DMatrix::zeros(t, p + q);
    w.columns_mut(0, p).copy_from(ds.x());
    w.columns_mut(p, q).copy_from(&ds.z_k(k));
    let fit = ols_fit(&w, ds.y()).map_err(|_| Error::SingularSubsample { k })?;
    Ok(BreakModel {
        beta: fit.coefficients.rows(0, p).into_owned(),
        delta: fit.coefficients.rows(p, q).into_owned(),
        residuals: fit.residuals.iter().copied().collect(),
    })
}

/// Coefficient on column `c` at observation index `row` (0-based).
fn coef(ds: &Dataset, m: &BreakModel, k: usize, row: usize, c: usize) -> f64 {
    let mut b = m.beta[c];
    if row >= k {
        if let Some(j) = ds.break_cols().iter().position(|&bc| bc == c) {
            b += m.delta[j];
        }
    }
    b
}

/// Rebuild `y*` and the lag columns of `X*` recursively from the presample.
fn recursive_sample(ds: &Dataset, m: &BreakModel, k: usize, errors: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let lags = ds
        .lags()
        .ok_or_else(|| Error::InvalidArgument("recursive bootstrap needs a dataset with lag structure".into()))?;
    let (t, p) = (ds.t(), ds.p());
    let mut x = ds.x().clone();
    let mut y = vec![0.0; t];
    let past = |y: &[f64], s: usize, j: usize| -> f64 {
        if s >= j {
            y[s - j]
        } else {
            lags.presample[j - s - 1]
        }
    };
    for s in 0..t {
        for &(c, j) in &lags.columns {
            x[(s, c)] = past(&y, s, j);
        }
        let mean: f64 = (0..p).map(|c| x[(s, c)] * coef(ds, m, k, s, c)).sum();
        y[s] = mean + errors[s];
    }
    Ok((DVector::from_vec(y), x))
}

fn replicate(ds: &Dataset, fit: &BreakFit, m: &BreakModel, method: BootstrapMethod, seed: u64, b: usize) -> Result<usize> {
    let mut rng = seeds::stream_rng(seed, b as u64 + 1);
    let errors = draw_errors(method, &m.residuals, &mut rng);
    let k = fit.k_hat;
    match fit.model {
        Model::Ar1 { objective } => {
            if method != BootstrapMethod::RecursiveAr {
                return Err(Error::InvalidArgument("AR(1) fits use the recursive bootstrap".into()));
            }
            let (y, _) = recursive_sample(ds, m, k, &errors)?;
            let lags = ds.lags().expect("checked in recursive_sample");
            let mut series = Vec::with_capacity(y.len() + 1);
            series.push(lags.presample[0]);
            series.extend(y.iter());
            Ok(estimate_break_ar1_with(&series, &fit.weight, fit.trim, objective)?.k_hat)
        }
        Model::Regression => {
            let star = match method {
                BootstrapMethod::RecursiveAr => {
                    let (y, x) = recursive_sample(ds, m, k, &errors)?;
                    Dataset::new(y, x, ds.break_cols().to_vec())?
                }
                _ => {
                    let fitted = ds.y() - DVector::from_column_slice(&m.residuals);
                    ds.with_response(fitted + DVector::from_vec(errors))?
                }
            };
            Ok(estimate_break(&star, &fit.weight, fit.trim)?.k_hat)
        }
    }
}

/// Percentile interval over `{k̂*_1, ..., k̂*_B, k̂}`. Replicate `b` draws from
/// stream `b + 1` of the generator seeded with `seed`. The interval is widened
/// to contain `k̂` if needed.
pub fn bootstrap_ci(
    ds: &Dataset,
    fit: &BreakFit,
    method: BootstrapMethod,
    b: usize,
    level: f64,
    seed: u64,
) -> Result<ConfidenceInterval> {
    if b < 99 {
        return Err(Error::InvalidArgument(format!("need at least 99 bootstrap replications, got {b}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level must lie in (0, 1), got {level}")));
    }
    if ds.t() != fit.t {
        return Err(Error::InvalidArgument("fit was computed on a different sample size".into()));
    }
    let m = fit_break_model(ds, fit.k_hat)?;
    if method == BootstrapMethod::RecursiveAr && ds.lags().is_none() {
        return Err(Error::InvalidArgument("recursive bootstrap needs a dataset with lag structure".into()));
    }
    let draws: Vec<Result<usize>> = (0..b)
        .into_par_iter()
        .map(|r| replicate(ds, fit, &m, method, seed, r))
        .collect();
    if let Some(Err(e @ Error::InvalidArgument(_))) = draws.iter().find(|d| d.is_err()) {
        return Err(e.clone());
    }
    let failed = draws.iter().filter(|d| d.is_err()).count();
    if failed as f64 > MAX_FAILURE_SHARE * b as f64 {
        return Err(Error::TooManyFailures { failed, total: b, limit_pct: MAX_FAILURE_SHARE * 100.0 });
    }
    let mut ks: Vec<usize> = draws.into_iter().filter_map(Result::ok).collect();
    ks.push(fit.k_hat);
    ks.sort_unstable();
    let alpha = 1.0 - level;
    let n = ks.len();
    let lower = ks[quantile_index(n, alpha / 2.0)].min(fit.k_hat).max(1);
    let upper = ks[quantile_index(n, 1.0 - alpha / 2.0)].max(fit.k_hat).min(ds.t() - 1);
    Ok(ConfidenceInterval {
        lower_k: lower,
        upper_k: upper,
        k_hat: fit.k_hat,
        level,
        method: method.ci_method(),
        replications: Some(b),
        failed_replications: Some(failed),
        scale: None,
        critical_value: None,
    })
}
