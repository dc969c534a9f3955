//! Samplers for the in-fill limit laws of ρ̂: the Brownian-bridge functional
//! for a small mean break, the Ornstein–Uhlenbeck functional for the AR(1)
//! break, and the two-sided argmax law for a large break.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::summary::{Histogram, Summary};
use crate::error::{Error, Result};
use crate::estimators::WeightScheme;
use crate::inference::argmax::{simulate_argmax, ARGMAX_HORIZON, ARGMAX_STEP};
use crate::linalg::{quad_form, sym_sqrt};
use crate::seeds;

/// Smallest accepted number of grid points for the bridge functional.
pub const MIN_GRID_N: usize = 100;

/// Draws of the limiting ρ̂ together with the true break fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    pub draws: Vec<f64>,
    pub truth: f64,
}

impl LimitSample {
    pub fn summary(&self) -> Summary {
        Summary::from_sample(&self.draws, self.truth)
    }

    pub fn histogram(&self) -> Histogram {
        Histogram::from_sample(&self.draws)
    }
}

/// Small-break limit in the model with break regressors of covariance `Σ_z`
/// and iid errors of unit variance.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanLimitConfig {
    pub rho0: f64,
    pub d0: DVector<f64>,
    /// Defaults to the identity.
    pub sigma_z: Option<DMatrix<f64>>,
}

/// Univariate small-break limit (Σ_z = 1).
pub fn infill_mean_limit(
    rho0: f64,
    d0: f64,
    w: &WeightScheme,
    grid_n: usize,
    reps: usize,
    seed: u64,
) -> Result<LimitSample> {
    let cfg = MeanLimitConfig { rho0, d0: DVector::from_element(1, d0), sigma_z: None };
    infill_mean_limit_with(&cfg, w, grid_n, reps, seed)
}

/// Draw `r` uses seed `derive(seed, [r])`. The objective at `ρ = j/n`,
/// `j = 1, ..., n-1`, is `W̃(ρ)'Ω̄(ρ)W̃(ρ)` with
/// `W̃(ρ) = (W(ρ) - ρW(1))/√(ρ(1-ρ)) - c(ρ)Σ_z^{1/2}d₀`,
/// `c(ρ) = (1-ρ₀)√(ρ/(1-ρ))` for `ρ ≤ ρ₀` and `ρ₀√((1-ρ)/ρ)` otherwise,
/// `Ω̄ = ω(ρ)²I` for scalar weights and `ρ(1-ρ)Σ_z` for the Fisher weight.
pub fn infill_mean_limit_with(
    cfg: &MeanLimitConfig,
    w: &WeightScheme,
    grid_n: usize,
    reps: usize,
    seed: u64,
) -> Result<LimitSample> {
    let q = cfg.d0.len();
    if !(cfg.rho0 > 0.0 && cfg.rho0 < 1.0) {
        return Err(Error::InvalidArgument(format!("rho0 must lie in (0, 1), got {}", cfg.rho0)));
    }
    if grid_n < MIN_GRID_N {
        return Err(Error::InvalidArgument(format!("grid_n must be at least {MIN_GRID_N}, got {grid_n}")));
    }
    let sigma_z = cfg.sigma_z.clone().unwrap_or_else(|| DMatrix::identity(q, q));
    if sigma_z.shape() != (q, q) {
        return Err(Error::WeightShapeMismatch { rows: sigma_z.nrows(), cols: sigma_z.ncols(), q });
    }
    let shift = sym_sqrt(&sigma_z) * &cfg.d0;
    let draws = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeds::rng(seeds::derive(seed, &[r as u64]));
            bridge_argmax(&mut rng, cfg.rho0, &shift, &sigma_z, w, grid_n)
        })
        .collect();
    Ok(LimitSample { draws, truth: cfg.rho0 })
}

fn bridge_argmax<R: Rng + ?Sized>(
    rng: &mut R,
    rho0: f64,
    shift: &DVector<f64>,
    sigma_z: &DMatrix<f64>,
    w: &WeightScheme,
    n: usize,
) -> f64 {
    let q = shift.len();
    let sd = (1.0 / n as f64).sqrt();
    // path[j*q + i] = W_i(j/n)
    let mut path = vec![0.0; (n + 1) * q];
    for j in 1..=n {
        for i in 0..q {
            let z: f64 = rng.sample(StandardNormal);
            path[j * q + i] = path[(j - 1) * q + i] + sd * z;
        }
    }
    let end = &path[n * q..];
    let mut wt = DVector::<f64>::zeros(q);
    let mut best = (0usize, f64::NEG_INFINITY);
    for j in 1..n {
        let rho = j as f64 / n as f64;
        let norm = (rho * (1.0 - rho)).sqrt();
        let c = if rho <= rho0 + 1e-12 {
            (1.0 - rho0) * (rho / (1.0 - rho)).sqrt()
        } else {
            rho0 * ((1.0 - rho) / rho).sqrt()
        };
        for i in 0..q {
            wt[i] = (path[j * q + i] - rho * end[i]) / norm - c * shift[i];
        }
        let value = match w.scalar(rho) {
            Some(omega) => omega * omega * wt.norm_squared(),
            None => rho * (1.0 - rho) * quad_form(sigma_z, &wt),
        };
        if value > best.1 {
            best = (j, value);
        }
    }
    best.0 as f64 / n as f64
}

/// Parameters of the AR(1) in-fill limit; `j0` is the initial value `J̃(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArLimitConfig {
    pub rho0: f64,
    pub mu: f64,
    pub delta: f64,
    pub j0: f64,
}

/// Draw `r` uses seed `derive(seed, [r])`. `J̃` follows
/// `dJ = -(μ + δ1{r > ρ₀})J dr + dB` by Euler–Maruyama with step `grid_h`;
/// at interior grid points `ρ` the objective is
/// `ω(ρ)²[(J(ρ)² - J(0)² - ρ)²/∫₀^ρ J² + (J(1)² - J(ρ)² - (1-ρ))²/∫_ρ^1 J²]`
/// with left Riemann sums for the integrals.
pub fn infill_ar_limit(
    cfg: &ArLimitConfig,
    w: &WeightScheme,
    grid_h: f64,
    reps: usize,
    seed: u64,
) -> Result<LimitSample> {
    if !(grid_h > 0.0 && grid_h <= 0.01) {
        return Err(Error::InvalidArgument(format!("grid_h must lie in (0, 0.01], got {grid_h}")));
    }
    if !(cfg.rho0 > 0.0 && cfg.rho0 < 1.0) {
        return Err(Error::InvalidArgument(format!("rho0 must lie in (0, 1), got {}", cfg.rho0)));
    }
    if !w.is_scalar() {
        return Err(Error::InvalidWeight("the AR(1) limit takes a scalar weight".into()));
    }
    let n = (1.0 / grid_h).round() as usize;
    let draws = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeds::rng(seeds::derive(seed, &[r as u64]));
            ou_argmax(&mut rng, cfg, w, n)
        })
        .collect();
    Ok(LimitSample { draws, truth: cfg.rho0 })
}

fn ou_argmax<R: Rng + ?Sized>(rng: &mut R, cfg: &ArLimitConfig, w: &WeightScheme, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let sd = h.sqrt();
    let mut j = vec![0.0; n + 1];
    // cum[i] = h Σ_{s<i} J_s²
    let mut cum = vec![0.0; n + 1];
    j[0] = cfg.j0;
    for i in 0..n {
        let r = i as f64 * h;
        let kappa = cfg.mu + if r >= cfg.rho0 - 1e-12 { cfg.delta } else { 0.0 };
        let z: f64 = rng.sample(StandardNormal);
        j[i + 1] = j[i] - kappa * j[i] * h + sd * z;
        cum[i + 1] = cum[i] + h * j[i] * j[i];
    }
    let (j0sq, j1sq, total) = (j[0] * j[0], j[n] * j[n], cum[n]);
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 1..n {
        let rho = i as f64 * h;
        let (left, right) = (cum[i], total - cum[i]);
        if !(left > 0.0 && right > 0.0) {
            continue;
        }
        let jsq = j[i] * j[i];
        let a = jsq - j0sq - rho;
        let b = j1sq - jsq - (1.0 - rho);
        let omega = w.scalar(rho).expect("scalar weight");
        let value = omega * omega * (a * a / left + b * b / right);
        if value > best.1 {
            best = (i, value);
        }
    }
    best.0 as f64 * h
}

/// Draws of `argmax_u {W(u) - |u|/2}` on the default grid and horizon.
pub fn infill_large_break_limit(reps: usize, seed: u64) -> Vec<f64> {
    simulate_argmax(reps, seed, ARGMAX_STEP, ARGMAX_HORIZON)
}
