//! Regression algebra shared by the estimators: OLS through a QR factorization,
//! the annihilator `M = I - X(X'X)^{-1}X'` applied without forming it, and the
//! SSR decomposition `S̄ = S(k)² + V(k)²`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value cutoff below which a design is treated as singular.
pub const SINGULAR_CUTOFF: f64 = 1e-10;

/// Lagged-response bookkeeping, needed only to rebuild the design recursively
/// (recursive AR bootstrap).
#[derive(Debug, Clone, PartialEq)]
pub struct LagStructure {
    /// `(column of X, lag j)`: column holds `y_{t-j}`.
    pub columns: Vec<(usize, usize)>,
    /// Presample values, newest first: `presample[0] = y_0`, `presample[1] = y_{-1}`, ...
    pub presample: Vec<f64>,
}

impl LagStructure {
    pub fn max_lag(&self) -> usize {
        self.columns.iter().map(|&(_, j)| j).max().unwrap_or(0)
    }
}

/// Response `y`, regressors `X` (T×p) and the columns of `X` whose coefficients break.
///
/// The selection matrix `R` is stored as column indices: `z_t = R'x_t` picks
/// `x_t[break_cols[j]]` for each `j`.
#[derive(Debug, Clone)]
pub struct Dataset {
    y: DVector<f64>,
    x: DMatrix<f64>,
    break_cols: Vec<usize>,
    labels: Option<Vec<String>>,
    lags: Option<LagStructure>,
}

impl Dataset {
    pub fn new(y: DVector<f64>, x: DMatrix<f64>, break_cols: Vec<usize>) -> Result<Self> {
        let t = y.len();
        let p = x.ncols();
        if x.nrows() != t {
            return Err(Error::InvalidDataset(format!(
                "X has {} rows but y has length {t}",
                x.nrows()
            )));
        }
        if p == 0 {
            return Err(Error::InvalidDataset("X has no columns".into()));
        }
        if t <= 2 * p {
            return Err(Error::InvalidDataset(format!("need T > 2p, got T = {t}, p = {p}")));
        }
        if break_cols.is_empty() {
            return Err(Error::InvalidDataset("no break-affected regressors".into()));
        }
        let mut seen = vec![false; p];
        for &c in &break_cols {
            if c >= p {
                return Err(Error::InvalidDataset(format!("break column {c} out of range (p = {p})")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidDataset(format!("break column {c} listed twice")));
            }
        }
        if y.iter().chain(x.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite value in y or X".into()));
        }
        check_rank(&x)?;
        Ok(Self { y, x, break_cols, labels: None, lags: None })
    }

    /// Mean-shift model: intercept-only design whose intercept breaks.
    pub fn mean_model(y: &[f64]) -> Result<Self> {
        let t = y.len();
        Self::new(DVector::from_column_slice(y), DMatrix::from_element(t, 1, 1.0), vec![0])
    }

    /// Pure AR(1) design from a series `(y_0, y_1, ..., y_T)`: regress `y_t` on `y_{t-1}`,
    /// whose coefficient breaks.
    pub fn ar1(series: &[f64]) -> Result<Self> {
        if series.len() < 2 {
            return Err(Error::InvalidDataset("AR(1) series needs y_0 and at least one more value".into()));
        }
        let t = series.len() - 1;
        let y = DVector::from_column_slice(&series[1..]);
        let x = DMatrix::from_column_slice(t, 1, &series[..t]);
        Ok(Self::new(y, x, vec![0])?.with_lags(LagStructure {
            columns: vec![(0, 1)],
            presample: vec![series[0]],
        }))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn with_lags(mut self, lags: LagStructure) -> Self {
        self.lags = Some(lags);
        self
    }

    pub fn t(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn q(&self) -> usize {
        self.break_cols.len()
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn break_cols(&self) -> &[usize] {
        &self.break_cols
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn lags(&self) -> Option<&LagStructure> {
        self.lags.as_ref()
    }

    /// The p×q selection matrix `R`.
    pub fn selection(&self) -> DMatrix<f64> {
        let mut r = DMatrix::zeros(self.p(), self.q());
        for (j, &c) in self.break_cols.iter().enumerate() {
            r[(c, j)] = 1.0;
        }
        r
    }

    /// `Z = XR` (T×q).
    pub fn z(&self) -> DMatrix<f64> {
        self.x.select_columns(&self.break_cols)
    }

    /// `Z_k`: `Z` with rows `t <= k` (1-based) set to zero.
    pub fn z_k(&self, k: usize) -> DMatrix<f64> {
        let mut z = self.z();
        z.rows_mut(0, k.min(self.t())).fill(0.0);
        z
    }

    /// Same regressors and break map with a new response.
    pub fn with_response(&self, y: DVector<f64>) -> Result<Self> {
        if y.len() != self.t() {
            return Err(Error::InvalidDataset("response length changed".into()));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite response".into()));
        }
        Ok(Self { y, ..self.clone() })
    }
}

/// Coefficients, residuals and SSR of a least-squares fit.
#[derive(Debug, Clone)]
pub struct RegressionFit {
    pub coefficients: DVector<f64>,
    pub residuals: DVector<f64>,
    pub ssr: f64,
}

fn check_rank(x: &DMatrix<f64>) -> Result<()> {
    let sv = x.singular_values();
    let largest = sv.max();
    let smallest = sv.min();
    if !(largest > 0.0) || smallest < SINGULAR_CUTOFF * largest {
        return Err(Error::SingularDesign { smallest, largest });
    }
    Ok(())
}

/// Orthonormal basis of the column span of `X`, used to apply `M` repeatedly.
#[derive(Debug, Clone)]
pub struct Projector {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl Projector {
    pub fn new(x: &DMatrix<f64>) -> Result<Self> {
        check_rank(x)?;
        let qr = x.clone().qr();
        Ok(Self { q: qr.q(), r: qr.r() })
    }

    /// Thin `Q` factor (T×p).
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn annihilate(&self, v: &DVector<f64>) -> DVector<f64> {
        v - &self.q * self.q.tr_mul(v)
    }

    pub fn annihilate_matrix(&self, v: &DMatrix<f64>) -> DMatrix<f64> {
        v - &self.q * self.q.tr_mul(v)
    }

    fn solve(&self, y: &DVector<f64>) -> DVector<f64> {
        let qty = self.q.tr_mul(y);
        self.r
            .solve_upper_triangular(&qty)
            .expect("R has a nonzero diagonal after the rank check")
    }
}

pub fn ols_fit(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<RegressionFit> {
    if x.nrows() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "X has {} rows, y has length {}",
            x.nrows(),
            y.len()
        )));
    }
    let proj = Projector::new(x)?;
    let coefficients = proj.solve(y);
    let residuals = proj.annihilate(y);
    let ssr = residuals.norm_squared();
    Ok(RegressionFit { coefficients, residuals, ssr })
}

/// `Mv`, computed from a QR factorization of `X`.
pub fn annihilate(x: &DMatrix<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
    if x.nrows() != v.len() {
        return Err(Error::InvalidArgument("dimension mismatch in annihilate".into()));
    }
    Ok(Projector::new(x)?.annihilate(v))
}

/// The three terms of `S̄ = S(k)² + V(k)²` at a candidate date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsrDecomposition {
    /// SSR of the no-break regression, `‖MY‖²`.
    pub sbar: f64,
    /// SSR with a break at `k`.
    pub s_k: f64,
    /// Explained sum of squares of the break term, `‖P_{MZ_k} MY‖²`.
    pub v_k_sq: f64,
}

impl SsrDecomposition {
    /// `|S̄ - S(k)² - V(k)²| / S̄` (zero when `S̄ = 0`).
    pub fn relative_gap(&self) -> f64 {
        let gap = (self.sbar - self.s_k - self.v_k_sq).abs();
        if self.sbar > 0.0 {
            gap / self.sbar
        } else {
            gap
        }
    }
}

pub fn ssr_decomposition_check(ds: &Dataset, k: usize) -> Result<SsrDecomposition> {
    let (lo, hi) = (ds.p(), ds.t() - ds.p());
    if k < lo || k > hi {
        return Err(Error::CandidateOutOfRange { k, lo, hi });
    }
    ssr_decomposition_unchecked(ds, k)
}

pub(crate) fn ssr_decomposition_unchecked(ds: &Dataset, k: usize) -> Result<SsrDecomposition> {
    let proj = Projector::new(ds.x())?;
    let my = proj.annihilate(ds.y());
    let mzk = proj.annihilate_matrix(&ds.z_k(k));
    let fit = ols_fit(&mzk, &my).map_err(|_| Error::SingularSubsample { k })?;
    let fitted = &my - &fit.residuals;
    Ok(SsrDecomposition {
        sbar: my.norm_squared(),
        s_k: fit.ssr,
        v_k_sq: fitted.norm_squared(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_of_ones_column() {
        let x = DMatrix::from_element(4, 1, 1.0);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        let fit = ols_fit(&x, &y).unwrap();
        assert!((fit.coefficients[0] - 2.5).abs() < 1e-12);
        assert!((fit.ssr - 5.0).abs() < 1e-12);
    }

    #[test]
    fn square_design_fits_exactly() {
        let x = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0]);
        let y = DVector::from_vec(vec![0.3, -1.0, 7.0]);
        let fit = ols_fit(&x, &y).unwrap();
        assert!(fit.residuals.amax() < 1e-12);
        assert!(fit.ssr < 1e-20);
    }

    #[test]
    fn line_through_points() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0]);
        let y = DVector::from_vec(vec![0.0, 1.0, 2.0]);
        let fit = ols_fit(&x, &y).unwrap();
        assert!(fit.coefficients[0].abs() < 1e-12);
        assert!((fit.coefficients[1] - 1.0).abs() < 1e-12);
        assert!(fit.ssr < 1e-20);
    }

    #[test]
    fn collinear_design_is_rejected() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        let y = DVector::from_vec(vec![0.0, 1.0, 2.0]);
        assert!(matches!(ols_fit(&x, &y), Err(Error::SingularDesign { .. })));
    }

    #[test]
    fn demeaning() {
        let x = DMatrix::from_element(3, 1, 1.0);
        let v = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let mv = annihilate(&x, &v).unwrap();
        for (a, b) in mv.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn span_and_complement() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0]);
        let in_span = DVector::from_vec(vec![2.0, 1.0, 0.0, -1.0]);
        assert!(annihilate(&x, &in_span).unwrap().amax() < 1e-12);
        // orthogonal to both (1,1,1,1) and (0,1,2,3)
        let orth = DVector::from_vec(vec![1.0, -1.0, -1.0, 1.0]);
        let mv = annihilate(&x, &orth).unwrap();
        assert!((mv - orth).amax() < 1e-12);
    }

    #[test]
    fn step_series_decomposition() {
        let ds = Dataset::mean_model(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let d = ssr_decomposition_check(&ds, 3).unwrap();
        assert!((d.sbar - 1.5).abs() < 1e-12);
        assert!(d.s_k.abs() < 1e-12);
        assert!((d.v_k_sq - 1.5).abs() < 1e-12);
    }

    #[test]
    fn constant_response_has_no_break_gain() {
        let ds = Dataset::mean_model(&[3.0; 8]).unwrap();
        for k in 1..8 {
            let d = ssr_decomposition_check(&ds, k).unwrap();
            assert!(d.v_k_sq.abs() < 1e-20);
        }
    }

    #[test]
    fn out_of_range_candidate() {
        let ds = Dataset::mean_model(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(
            ssr_decomposition_check(&ds, 0),
            Err(Error::CandidateOutOfRange { .. })
        ));
        assert!(matches!(
            ssr_decomposition_check(&ds, 5),
            Err(Error::CandidateOutOfRange { .. })
        ));
    }

    #[test]
    fn dataset_validation() {
        let y = DVector::from_vec(vec![1.0; 4]);
        let x = DMatrix::from_element(4, 2, 1.0);
        assert!(Dataset::new(y.clone(), x, vec![0]).is_err());
        let x = DMatrix::from_row_slice(4, 1, &[1.0, 2.0, 3.0, 4.0]);
        assert!(Dataset::new(y.clone(), x.clone(), vec![]).is_err());
        assert!(Dataset::new(y.clone(), x.clone(), vec![1]).is_err());
        assert!(Dataset::new(y, x, vec![0]).is_ok());
    }

    #[test]
    fn z_k_zeroes_leading_rows() {
        let ds = Dataset::mean_model(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let z = ds.z_k(2);
        assert_eq!(z.as_slice(), &[0.0, 0.0, 1.0, 1.0, 1.0]);
    }
}
