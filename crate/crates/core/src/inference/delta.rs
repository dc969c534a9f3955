use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::hac::{long_run_variance, newey_west_bandwidth};
use crate::error::{Error, Result};
use crate::estimators::{BreakFit, Candidate};
use crate::linalg::{sym_eig_range, symmetrize};
use crate::linreg::{Dataset, Projector};

/// Estimator of the score variance `U` in the sandwich `V⁻¹UV⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum UEstimator {
    Iid,
    Hac { bandwidth: usize },
}

impl UEstimator {
    pub fn hac_default(t: usize) -> Self {
        Self::Hac { bandwidth: newey_west_bandwidth(t) }
    }
}

/// Break magnitude at a candidate date with its sampling covariance.
#[derive(Debug, Clone)]
pub struct DeltaEstimate {
    pub k: usize,
    pub delta_hat: DVector<f64>,
    /// `V̂⁻¹ÛV̂⁻¹ / T`.
    pub covariance: DMatrix<f64>,
    pub u_estimator: UEstimator,
    /// `V̂ = T⁻¹ Ẑ'MẐ`.
    pub v_hat: DMatrix<f64>,
    pub u_hat: DMatrix<f64>,
    /// Residuals of the break regression, `MY - MẐδ̂`.
    pub residuals: DVector<f64>,
    /// `SSR / (T - p - q)`.
    pub sigma2: f64,
}

impl DeltaEstimate {
    pub fn std_errors(&self) -> DVector<f64> {
        self.covariance.diagonal().map(|v| v.max(0.0).sqrt())
    }
}

/// `δ̂` at `fit.k_hat`.
pub fn estimate_delta(ds: &Dataset, fit: &BreakFit, u: UEstimator) -> Result<DeltaEstimate> {
    estimate_delta_at(ds, fit.k_hat, u)
}

pub fn estimate_delta_at(ds: &Dataset, k: usize, u: UEstimator) -> Result<DeltaEstimate> {
    let (t, p, q) = (ds.t(), ds.p(), ds.q());
    if k < 1 || k >= t {
        return Err(Error::CandidateOutOfRange { k, lo: 1, hi: t - 1 });
    }
    let proj = Projector::new(ds.x())?;
    let my = proj.annihilate(ds.y());
    let zk = ds.z_k(k);
    let mz = proj.annihilate_matrix(&zk);
    let (_, reference) = sym_eig_range(&zk.tr_mul(&zk));
    let c = Candidate::new(k, mz.tr_mul(&mz), mz.tr_mul(&my), reference)
        .ok_or(Error::SingularSubsample { k })?;
    let residuals = &my - &mz * &c.delta;
    let dof = if t > p + q { t - p - q } else { t };
    let sigma2 = residuals.norm_squared() / dof as f64;
    let v_hat = &c.a / t as f64;
    let u_hat = match u {
        UEstimator::Iid => &v_hat * sigma2,
        UEstimator::Hac { bandwidth } => {
            let mut g = mz.clone();
            for (mut row, e) in g.row_iter_mut().zip(residuals.iter()) {
                row *= *e;
            }
            long_run_variance(&g, bandwidth)
        }
    };
    let v_inv = v_hat.clone().try_inverse().ok_or(Error::SingularSubsample { k })?;
    let covariance = symmetrize(&(&v_inv * &u_hat * &v_inv / t as f64));
    Ok(DeltaEstimate { k, delta_hat: c.delta, covariance, u_estimator: u, v_hat, u_hat, residuals, sigma2 })
}
