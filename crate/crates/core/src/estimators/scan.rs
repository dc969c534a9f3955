//! One pass over the candidate grid computing `A_k = Z_k'MZ_k` and
//! `b_k = Z_k'MY` for every k, at O(T) cost per candidate.

use nalgebra::{DMatrix, DVector};

use super::weights::WeightScheme;
use crate::error::{Error, Result};
use crate::linalg::{quad_form, sym_eig_range, sym_sqrt};
use crate::linreg::{Dataset, Projector};

/// Relative eigenvalue cutoff for `Z_k'MZ_k` against `Z_k'Z_k`.
pub const SUBSAMPLE_CUTOFF: f64 = 1e-10;

/// Sufficient statistics of the break regression at one candidate date.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub k: usize,
    /// `Z_k'MZ_k`.
    pub a: DMatrix<f64>,
    /// `Z_k'MY`.
    pub b: DVector<f64>,
    /// `δ̂_k = A⁻¹b`.
    pub delta: DVector<f64>,
    /// `V(k)² = δ̂'Aδ̂`.
    pub v_sq: f64,
}

impl Candidate {
    pub fn new(k: usize, a: DMatrix<f64>, b: DVector<f64>, reference: f64) -> Option<Self> {
        let (lmin, _) = sym_eig_range(&a);
        if !(reference > 0.0) || lmin <= SUBSAMPLE_CUTOFF * reference {
            return None;
        }
        let delta = a.clone().cholesky()?.solve(&b);
        let v_sq = b.dot(&delta).max(0.0);
        Some(Self { k, a, b, delta, v_sq })
    }

    /// `Q(k)²` under `w` for a sample of size `t`.
    pub fn objective(&self, w: &WeightScheme, t: usize) -> f64 {
        match w.scalar(self.k as f64 / t as f64) {
            Some(omega) => omega * omega * self.v_sq,
            None => {
                let omega = &self.a / t as f64;
                weighted_form(&self.a, &self.delta, &omega)
            }
        }
    }
}

/// `δ'A^{1/2} Ω A^{1/2} δ`.
pub fn weighted_form(a: &DMatrix<f64>, delta: &DVector<f64>, omega: &DMatrix<f64>) -> f64 {
    if a.nrows() == 1 {
        return a[(0, 0)].max(0.0) * delta[0] * delta[0] * omega[(0, 0)];
    }
    let s = sym_sqrt(a) * delta;
    quad_form(omega, &s).max(0.0)
}

/// Candidate statistics over `lo..=hi`; `None` marks singular candidates.
#[derive(Debug, Clone)]
pub struct CandidateScan {
    t: usize,
    lo: usize,
    hi: usize,
    trim: f64,
    candidates: Vec<Option<Candidate>>,
    degenerate_response: bool,
}

impl CandidateScan {
    pub fn new(ds: &Dataset, trim: f64) -> Result<Self> {
        let (lo, hi) = super::trimmed_grid(ds.t(), trim)?;
        let mut scan = Self::over(ds, lo, hi)?;
        scan.trim = trim;
        Ok(scan)
    }

    /// Scan an explicit range `lo..=hi` (1 ≤ lo ≤ hi ≤ T-1).
    pub fn over(ds: &Dataset, lo: usize, hi: usize) -> Result<Self> {
        let (t, p, q) = (ds.t(), ds.p(), ds.q());
        if lo < 1 || hi > t - 1 || lo > hi {
            return Err(Error::InvalidArgument(format!("candidate range [{lo}, {hi}] invalid for T = {t}")));
        }
        let proj = Projector::new(ds.x())?;
        let my = proj.annihilate(ds.y());
        let degenerate_response = my.norm() <= 1e-10 * ds.y().norm();
        let basis = proj.basis();
        let z = ds.z();

        // row-major copies for the inner loops
        let qrow: Vec<f64> = (0..t).flat_map(|i| basis.row(i).iter().copied().collect::<Vec<_>>()).collect();
        let zrow: Vec<f64> = (0..t).flat_map(|i| z.row(i).iter().copied().collect::<Vec<_>>()).collect();

        let mut g = vec![0.0; p * q]; // Q'Z_k, row-major p×q
        let mut zz = DMatrix::<f64>::zeros(q, q); // Z_k'Z_k
        let mut m = vec![0.0; q];
        let mut candidates = vec![None; hi - lo + 1];

        for k in (lo..t).rev() {
            // Z_k gains observation t = k+1 (row index k)
            let zr = &zrow[k * q..(k + 1) * q];
            let qr = &qrow[k * p..(k + 1) * p];
            for l in 0..p {
                for j in 0..q {
                    g[l * q + j] += qr[l] * zr[j];
                }
            }
            for i in 0..q {
                for j in 0..q {
                    zz[(i, j)] += zr[i] * zr[j];
                }
            }
            if k > hi {
                continue;
            }
            let mut a = DMatrix::<f64>::zeros(q, q);
            let mut b = DVector::<f64>::zeros(q);
            for row in 0..t {
                let qr = &qrow[row * p..(row + 1) * p];
                for j in 0..q {
                    let proj: f64 = (0..p).map(|l| qr[l] * g[l * q + j]).sum();
                    m[j] = if row >= k { zrow[row * q + j] } else { 0.0 } - proj;
                }
                for i in 0..q {
                    b[i] += m[i] * my[row];
                    for j in 0..=i {
                        a[(i, j)] += m[i] * m[j];
                    }
                }
            }
            for i in 0..q {
                for j in 0..i {
                    a[(j, i)] = a[(i, j)];
                }
            }
            let (_, reference) = sym_eig_range(&zz);
            candidates[k - lo] = Candidate::new(k, a, b, reference);
        }
        Ok(Self { t, lo, hi, trim: f64::NAN, candidates, degenerate_response })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn range(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn trim(&self) -> f64 {
        self.trim
    }

    /// True when the response is (numerically) in the span of X, so every
    /// candidate objective is zero.
    pub fn degenerate_response(&self) -> bool {
        self.degenerate_response
    }

    pub fn candidate(&self, k: usize) -> Option<&Candidate> {
        if k < self.lo || k > self.hi {
            return None;
        }
        self.candidates[k - self.lo].as_ref()
    }

    pub fn candidates(&self) -> impl Iterator<Item = Option<&Candidate>> {
        self.candidates.iter().map(Option::as_ref)
    }

    /// Objective curve over the grid; singular candidates are `None`.
    pub fn curve(&self, w: &WeightScheme) -> Vec<Option<f64>> {
        self.candidates
            .iter()
            .map(|c| c.as_ref().map(|c| c.objective(w, self.t)).filter(|v| v.is_finite()))
            .collect()
    }
}
