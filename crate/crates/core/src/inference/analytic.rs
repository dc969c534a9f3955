use nalgebra::{DMatrix, DVector};

use super::argmax::argmax_w_quantile;
use super::ci::{CiMethod, ConfidenceInterval};
use super::delta::{DeltaEstimate, UEstimator};
use super::hac::{long_run_variance, newey_west_bandwidth};
use crate::error::{Error, Result};
use crate::estimators::BreakFit;
use crate::linalg::quad_form;
use crate::linreg::Dataset;

/// `L̂ = (δ'Σ_zΩδ)² / (δ'ΩΞΩδ)`.
pub fn large_break_scale(
    delta: &DVector<f64>,
    sigma_z: &DMatrix<f64>,
    omega: &DMatrix<f64>,
    xi: &DMatrix<f64>,
) -> Result<f64> {
    let num = delta.dot(&(sigma_z * omega * delta));
    if !(num > 1e-12) {
        return Err(Error::ZeroMagnitude(num));
    }
    let od = omega * delta;
    let den = quad_form(xi, &od);
    if !(den > 0.0) {
        return Err(Error::InvalidArgument(format!("delta'Omega Xi Omega delta = {den:e} is not positive")));
    }
    Ok(num * num / den)
}

/// `[k̂ - ⌊c/L⌋ - 1, k̂ + ⌊c/L⌋ + 1] ∩ [1, T-1]`.
pub fn analytic_interval(k_hat: usize, t: usize, scale: f64, critical_value: f64) -> (usize, usize) {
    let ratio = (critical_value / scale).floor();
    let half = if ratio.is_finite() && ratio < t as f64 { ratio as usize + 1 } else { t };
    (k_hat.saturating_sub(half).max(1), (k_hat + half).min(t - 1))
}

/// Analytic interval under the large-break approximation. `Ξ̂` is the HAC
/// long-run variance of `z_t ε̂_t` (bandwidth from `de` when it is HAC, else
/// the Newey–West default).
pub fn analytic_ci(ds: &Dataset, fit: &BreakFit, de: &DeltaEstimate, level: f64) -> Result<ConfidenceInterval> {
    let t = ds.t();
    let z = ds.z();
    let sigma_z = z.tr_mul(&z) / t as f64;
    let bandwidth = match de.u_estimator {
        UEstimator::Hac { bandwidth } => bandwidth,
        UEstimator::Iid => newey_west_bandwidth(t),
    };
    let mut g = z.clone();
    for (mut row, e) in g.row_iter_mut().zip(de.residuals.iter()) {
        row *= *e;
    }
    let xi = long_run_variance(&g, bandwidth);
    let omega = match fit.weight.scalar(fit.k_hat as f64 / t as f64) {
        Some(w) => DMatrix::identity(ds.q(), ds.q()) * (w * w),
        None => de.v_hat.clone(),
    };
    let scale = large_break_scale(&de.delta_hat, &sigma_z, &omega, &xi)?;
    let c = argmax_w_quantile(level);
    let (lower_k, upper_k) = analytic_interval(fit.k_hat, t, scale, c);
    Ok(ConfidenceInterval {
        lower_k,
        upper_k,
        k_hat: fit.k_hat,
        level,
        method: CiMethod::AnalyticLargeBreak,
        replications: None,
        failed_replications: None,
        scale: Some(scale),
        critical_value: Some(c),
    })
}
