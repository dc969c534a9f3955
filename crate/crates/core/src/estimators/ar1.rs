//! AR(1) break in the autoregressive coefficient, `y_t = β_t y_{t-1} + ε_t`,
//! with the two-regime SSR evaluated from prefix sums.

use serde::{Deserialize, Serialize};

use super::{trimmed_grid, BreakFit, Direction, Model, WeightScheme};
use crate::error::{Error, Result};

/// Objective used for the AR(1) estimator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ar1Objective {
    /// `argmax ω_k²(S̄ - S(k)²)`: the weighted SSR reduction.
    #[default]
    WeightedGain,
    /// `argmin ω_k² S(k)²`: weight applied to the whole two-regime SSR.
    WeightedSsr,
}

/// Break estimate for a series `(y_0, y_1, ..., y_T)` with the default objective.
pub fn estimate_break_ar1(y: &[f64], w: &WeightScheme, trim: f64) -> Result<BreakFit> {
    estimate_break_ar1_with(y, w, trim, Ar1Objective::default())
}

pub fn estimate_break_ar1_with(
    y: &[f64],
    w: &WeightScheme,
    trim: f64,
    objective: Ar1Objective,
) -> Result<BreakFit> {
    if y.len() < 11 {
        return Err(Error::InvalidArgument(format!(
            "AR(1) estimator needs T >= 10 observations after y_0, got {}",
            y.len().saturating_sub(1)
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidDataset("non-finite value in series".into()));
    }
    if !w.is_scalar() {
        return Err(Error::InvalidWeight("the AR(1) estimator takes a scalar weight".into()));
    }
    let t = y.len() - 1;
    let (lo, hi) = trimmed_grid(t, trim)?;

    // prefix sums over t = 1..=k of y_{t-1}², y_{t-1}y_t
    let mut pxx = vec![0.0; t + 1];
    let mut pxy = vec![0.0; t + 1];
    for s in 1..=t {
        pxx[s] = pxx[s - 1] + y[s - 1] * y[s - 1];
        pxy[s] = pxy[s - 1] + y[s - 1] * y[s];
    }
    let syy: f64 = y[1..].iter().map(|v| v * v).sum();
    let (sxx, sxy) = (pxx[t], pxy[t]);
    let fitted_one = sxy * sxy / sxx;

    let curve = (lo..=hi)
        .map(|k| {
            let (x1, x2) = (pxx[k], sxx - pxx[k]);
            if !(x1 > 0.0 && x2 > 0.0) {
                return Err(Error::DegenerateSubsample { k });
            }
            let (c1, c2) = (pxy[k], sxy - pxy[k]);
            let gain = c1 * c1 / x1 + c2 * c2 / x2 - fitted_one;
            let omega = w.scalar(k as f64 / t as f64).expect("scalar weight");
            let value = match objective {
                Ar1Objective::WeightedGain => omega * omega * gain.max(0.0),
                Ar1Objective::WeightedSsr => omega * omega * (syy - c1 * c1 / x1 - c2 * c2 / x2).max(0.0),
            };
            Ok(Some(value).filter(|v| v.is_finite()))
        })
        .collect::<Result<Vec<_>>>()?;

    let direction = match objective {
        Ar1Objective::WeightedGain => Direction::Maximize,
        Ar1Objective::WeightedSsr => Direction::Minimize,
    };
    BreakFit::from_curve(curve, lo, t, direction, trim, w, Model::Ar1 { objective })
}
