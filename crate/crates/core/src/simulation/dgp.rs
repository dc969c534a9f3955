use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linreg::Dataset;
use crate::seeds;

/// `k₀ = ⌊ρ₀T⌋`.
pub fn break_index(t: usize, rho0: f64) -> usize {
    (rho0 * t as f64 + 1e-9).floor() as usize
}

/// `y_t = μ + (d₀/√T) 1{t > k₀} + σε_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanBreakConfig {
    #[serde(rename = "T")]
    pub t: usize,
    pub rho0: f64,
    pub mu: f64,
    pub d0: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl MeanBreakConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t < 20 {
            return Err(Error::InvalidArgument(format!("T must be at least 20, got {}", self.t)));
        }
        if !(self.rho0 > 0.0 && self.rho0 < 1.0) {
            return Err(Error::InvalidArgument(format!("rho0 must lie in (0, 1), got {}", self.rho0)));
        }
        if !(self.sigma > 0.0) || !self.mu.is_finite() || !self.d0.is_finite() {
            return Err(Error::InvalidArgument("sigma must be positive and mu, d0 finite".into()));
        }
        Ok(())
    }

    pub fn k0(&self) -> usize {
        break_index(self.t, self.rho0)
    }

    pub fn delta(&self) -> f64 {
        self.d0 / (self.t as f64).sqrt()
    }
}

pub fn mean_break_series<R: Rng + ?Sized>(cfg: &MeanBreakConfig, rng: &mut R) -> Vec<f64> {
    let (k0, delta) = (cfg.k0(), cfg.delta());
    (1..=cfg.t)
        .map(|s| {
            let e: f64 = rng.sample(StandardNormal);
            cfg.mu + if s > k0 { delta } else { 0.0 } + cfg.sigma * e
        })
        .collect()
}

/// Intercept-only dataset whose intercept shifts after `k₀`.
pub fn gen_mean_break(cfg: &MeanBreakConfig) -> Result<Dataset> {
    cfg.validate()?;
    Dataset::mean_model(&mean_break_series(cfg, &mut seeds::rng(cfg.seed)))
}

/// `y_t = (β₁1{t ≤ k₀} + β₂1{t > k₀}) y_{t-1} + σε_t` with
/// `β₁ = exp(-μ/T)`, `β₂ = exp(-(μ+δ)/T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArBreakConfig {
    #[serde(rename = "T")]
    pub t: usize,
    pub rho0: f64,
    pub mu: f64,
    pub delta: f64,
    pub sigma: f64,
    pub y0: f64,
    pub seed: u64,
}

impl ArBreakConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t < 20 {
            return Err(Error::InvalidArgument(format!("T must be at least 20, got {}", self.t)));
        }
        if !(self.rho0 > 0.0 && self.rho0 < 1.0) {
            return Err(Error::InvalidArgument(format!("rho0 must lie in (0, 1), got {}", self.rho0)));
        }
        let (b1, b2) = self.betas();
        if !(self.sigma > 0.0) || !b1.is_finite() || !b2.is_finite() || !self.y0.is_finite() {
            return Err(Error::InvalidArgument("sigma must be positive; beta1, beta2, y0 finite".into()));
        }
        Ok(())
    }

    pub fn betas(&self) -> (f64, f64) {
        let t = self.t as f64;
        ((-self.mu / t).exp(), (-(self.mu + self.delta) / t).exp())
    }

    pub fn k0(&self) -> usize {
        break_index(self.t, self.rho0)
    }
}

/// `(μ, δ)` giving AR roots `(β₁, β₂)` at sample size `t`.
pub fn ar_params_from_betas(beta1: f64, beta2: f64, t: usize) -> (f64, f64) {
    let mu = -(t as f64) * beta1.ln();
    (mu, -(t as f64) * beta2.ln() - mu)
}

pub fn ar1_break_series<R: Rng + ?Sized>(cfg: &ArBreakConfig, rng: &mut R) -> Vec<f64> {
    let (b1, b2) = cfg.betas();
    let k0 = cfg.k0();
    let mut y = Vec::with_capacity(cfg.t + 1);
    y.push(cfg.y0);
    for s in 1..=cfg.t {
        let e: f64 = rng.sample(StandardNormal);
        let beta = if s <= k0 { b1 } else { b2 };
        y.push(beta * y[s - 1] + cfg.sigma * e);
    }
    y
}

/// Series `(y_0, y_1, ..., y_T)`.
pub fn gen_ar1_break(cfg: &ArBreakConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    Ok(ar1_break_series(cfg, &mut seeds::rng(cfg.seed)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_cfg(seed: u64) -> MeanBreakConfig {
        MeanBreakConfig { t: 100, rho0: 0.3, mu: 0.0, d0: 4.0, sigma: 1.0, seed }
    }

    #[test]
    fn local_to_unity_roots() {
        let ar = |mu, delta| ArBreakConfig { t: 200, rho0: 0.5, mu, delta, sigma: 1.0, y0: 0.0, seed: 0 };
        let (b1, b2) = ar(138.0, 55.0).betas();
        assert!((b1 - 0.50).abs() < 0.005 && (b2 - 0.38).abs() < 0.005);
        let (b1, b2) = ar(1.0, 5.0).betas();
        assert!((b1 - 0.995).abs() < 0.0005 && (b2 - 0.97).abs() < 0.0005);
        let (b1, b2) = ar(3.0, 0.0).betas();
        assert_eq!(b1, b2);
    }

    #[test]
    fn betas_round_trip() {
        let (mu, delta) = ar_params_from_betas(0.5, 0.38, 200);
        let cfg = ArBreakConfig { t: 200, rho0: 0.5, mu, delta, sigma: 1.0, y0: 0.0, seed: 0 };
        let (b1, b2) = cfg.betas();
        assert!((b1 - 0.5).abs() < 1e-12 && (b2 - 0.38).abs() < 1e-12);
    }

    #[test]
    fn noiseless_split() {
        let cfg = MeanBreakConfig { sigma: 1e-12, ..mean_cfg(1) };
        let ds = gen_mean_break(&cfg).unwrap();
        let y = ds.y();
        let pre = y.rows(0, 30).mean();
        let post = y.rows(30, 70).mean();
        assert!((post - pre - 0.4).abs() < 1e-9);
    }

    #[test]
    fn seeded() {
        let a = gen_mean_break(&mean_cfg(5)).unwrap();
        let b = gen_mean_break(&mean_cfg(5)).unwrap();
        let c = gen_mean_break(&mean_cfg(6)).unwrap();
        assert_eq!(a.y(), b.y());
        assert_ne!(a.y(), c.y());
    }

    #[test]
    fn overall_mean_matches_design() {
        // μ + (1-ρ₀)δ = 0.88 + 0.7·(-0.29) ≈ 0.68
        let mut total = 0.0;
        let reps = 2000;
        for s in 0..reps {
            let cfg = MeanBreakConfig { t: 100, rho0: 0.3, mu: 0.88, d0: -2.9, sigma: 0.8, seed: s };
            total += gen_mean_break(&cfg).unwrap().y().mean();
        }
        assert!((total / reps as f64 - 0.677).abs() < 0.01);
    }

    #[test]
    fn ar_series_starts_at_y0() {
        let cfg = ArBreakConfig { t: 50, rho0: 0.5, mu: 1.0, delta: 5.0, sigma: 1.0, y0: 3.0, seed: 9 };
        let y = gen_ar1_break(&cfg).unwrap();
        assert_eq!(y.len(), 51);
        assert_eq!(y[0], 3.0);
        assert_eq!(y, gen_ar1_break(&cfg).unwrap());
    }
}
