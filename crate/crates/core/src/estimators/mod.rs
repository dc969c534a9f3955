//! Break-date estimators: least squares, the weighted objective
//! `Q(k)² = δ̂'A^{1/2}Ω_kA^{1/2}δ̂`, and the AR(1) variant.

mod ar1;
mod scan;
mod validate;
mod weights;

pub use ar1::{estimate_break_ar1, estimate_break_ar1_with, Ar1Objective};
pub use scan::{weighted_form, Candidate, CandidateScan, SUBSAMPLE_CUTOFF};
pub use validate::{validate_weight_scheme, ValidationReport, Violation};
pub use weights::{Method, TabulatedWeight, WeightScheme, TABLE_POINTS};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linreg::{ssr_decomposition_unchecked, Dataset, Projector};

pub const DEFAULT_TRIM: f64 = 0.15;

const GRID_EPS: f64 = 1e-9;

/// Candidate range `[⌈αT⌉, ⌊(1-α)T⌋] ∩ [1, T-1]`.
pub fn trimmed_grid(t: usize, trim: f64) -> Result<(usize, usize)> {
    if !(trim > 0.0 && trim < 0.5) {
        return Err(Error::InvalidTrim(trim));
    }
    let tf = t as f64;
    let lo = ((trim * tf - GRID_EPS).ceil().max(1.0)) as usize;
    let hi = (((1.0 - trim) * tf + GRID_EPS).floor() as usize).min(t.saturating_sub(1));
    if t < 2 || lo > hi {
        return Err(Error::EmptyGrid { t, trim });
    }
    Ok((lo, hi))
}

/// Whether the objective is maximized or minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Maximize,
    Minimize,
}

/// Which estimator produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum Model {
    Regression,
    Ar1 { objective: Ar1Objective },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakFit {
    pub k_hat: usize,
    pub rho_hat: f64,
    pub t: usize,
    /// First candidate of the grid; `objective_curve[i]` belongs to `k = grid_start + i`.
    pub grid_start: usize,
    pub objective_curve: Vec<Option<f64>>,
    pub method: Method,
    pub direction: Direction,
    pub trim: f64,
    pub weight: WeightScheme,
    pub model: Model,
}

impl BreakFit {
    pub(crate) fn from_curve(
        curve: Vec<Option<f64>>,
        grid_start: usize,
        t: usize,
        direction: Direction,
        trim: f64,
        weight: &WeightScheme,
        model: Model,
    ) -> Result<Self> {
        let better = |v: f64, best: f64| match direction {
            Direction::Maximize => v > best,
            Direction::Minimize => v < best,
        };
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in curve.iter().enumerate() {
            if let Some(v) = *v {
                if best.is_none_or(|(_, b)| better(v, b)) {
                    best = Some((i, v));
                }
            }
        }
        let (i, _) = best.ok_or(Error::AllCandidatesSingular {
            lo: grid_start,
            hi: grid_start + curve.len().saturating_sub(1),
        })?;
        let k_hat = grid_start + i;
        Ok(Self {
            k_hat,
            rho_hat: k_hat as f64 / t as f64,
            t,
            grid_start,
            objective_curve: curve,
            method: weight.method(),
            direction,
            trim,
            weight: weight.clone(),
            model,
        })
    }

    pub fn grid_end(&self) -> usize {
        self.grid_start + self.objective_curve.len() - 1
    }

    pub fn objective_at(&self, k: usize) -> Option<f64> {
        k.checked_sub(self.grid_start)
            .and_then(|i| self.objective_curve.get(i).copied().flatten())
    }

    /// `(k, value)` pairs over the grid.
    pub fn curve_points(&self) -> impl Iterator<Item = (usize, Option<f64>)> + '_ {
        self.objective_curve.iter().enumerate().map(|(i, v)| (self.grid_start + i, *v))
    }
}

impl CandidateScan {
    /// Maximize `Q(k)²` under `w` over this scan.
    pub fn estimate(&self, w: &WeightScheme) -> Result<BreakFit> {
        let (lo, hi) = self.range();
        if self.degenerate_response() {
            return Err(Error::AllCandidatesSingular { lo, hi });
        }
        BreakFit::from_curve(
            self.curve(w),
            lo,
            self.t(),
            Direction::Maximize,
            self.trim(),
            w,
            Model::Regression,
        )
    }
}

/// `k̂ = argmax Q(k)²` over the trimmed grid (smallest k on ties).
pub fn estimate_break(ds: &Dataset, w: &WeightScheme, trim: f64) -> Result<BreakFit> {
    CandidateScan::new(ds, trim)?.estimate(w)
}

fn check_candidate(ds: &Dataset, k: usize) -> Result<()> {
    let t = ds.t();
    if k < 1 || k + 1 > t {
        return Err(Error::CandidateOutOfRange { k, lo: 1, hi: t.saturating_sub(1) });
    }
    Ok(())
}

/// `V(k)² = S̄ - S(k)²`, the SSR reduction from a break at `k`.
pub fn vt_sq(ds: &Dataset, k: usize) -> Result<f64> {
    check_candidate(ds, k)?;
    single_candidate(ds, k)?;
    Ok(ssr_decomposition_unchecked(ds, k)?.v_k_sq)
}

/// Statistics at a single k, or `SingularSubsample`.
fn single_candidate(ds: &Dataset, k: usize) -> Result<Candidate> {
    let proj = Projector::new(ds.x())?;
    let my = proj.annihilate(ds.y());
    let mzk = proj.annihilate_matrix(&ds.z_k(k));
    let zk = ds.z_k(k);
    let (_, reference) = crate::linalg::sym_eig_range(&zk.tr_mul(&zk));
    Candidate::new(k, mzk.tr_mul(&mzk), mzk.tr_mul(&my), reference).ok_or(Error::SingularSubsample { k })
}

/// `Q(k)²` under weight scheme `w`.
pub fn qt_sq(ds: &Dataset, k: usize, w: &WeightScheme) -> Result<f64> {
    check_candidate(ds, k)?;
    match w.scalar(k as f64 / ds.t() as f64) {
        Some(omega) => {
            let v = vt_sq(ds, k)?;
            Ok(if omega == 1.0 { v } else { omega * omega * v })
        }
        None => {
            let c = single_candidate(ds, k)?;
            Ok(c.objective(w, ds.t()))
        }
    }
}

/// `Q(k)²` with an explicit q×q weight matrix `Ω_k`.
pub fn qt_sq_with_matrix(ds: &Dataset, k: usize, omega: &DMatrix<f64>) -> Result<f64> {
    check_candidate(ds, k)?;
    let q = ds.q();
    if omega.nrows() != q || omega.ncols() != q {
        return Err(Error::WeightShapeMismatch { rows: omega.nrows(), cols: omega.ncols(), q });
    }
    let c = single_candidate(ds, k)?;
    Ok(weighted_form(&c.a, &c.delta, omega))
}
