//! Admissibility checks for weight schemes: the scalar slope bound
//! `|ω'(ρ)/ω(ρ)| < 1/(2ρ(1-ρ))` and, for the matrix weight, positive
//! definiteness and boundedness of Ω_k on the grid.

use serde::{Deserialize, Serialize};

use super::{trimmed_grid, CandidateScan, WeightScheme, TABLE_POINTS};
use crate::linalg::sym_eig_range;
use crate::linreg::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub k: Option<usize>,
    pub rho: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub scheme: String,
    pub passed: bool,
    pub violations: Vec<Violation>,
    /// The norm inequality over all pairs (k, k₀) is not checked: k₀ is unknown.
    pub pairwise_inequality_checked: bool,
    pub notes: Vec<String>,
}

fn slope_bound(rho: f64) -> f64 {
    1.0 / (2.0 * rho * (1.0 - rho))
}

pub fn validate_weight_scheme(w: &WeightScheme, ds: &Dataset, trim: f64) -> ValidationReport {
    let mut report = ValidationReport {
        scheme: w.to_string(),
        passed: true,
        violations: Vec::new(),
        pairwise_inequality_checked: false,
        notes: Vec::new(),
    };
    let t = ds.t();
    let grid = match trimmed_grid(t, trim) {
        Ok((lo, hi)) => lo..=hi,
        Err(e) => {
            report.passed = false;
            report.notes.push(e.to_string());
            return report;
        }
    };
    let rho_of = |k: usize| k as f64 / t as f64;

    match w {
        WeightScheme::Unit => {}
        WeightScheme::PowerConcave { gamma } => {
            // |ω'/ω| = γ|1-2ρ|/(ρ(1-ρ)), so the bound reads γ|1-2ρ| < 1/2
            report.passed = (0.0..=0.5).contains(gamma);
            for k in grid {
                let rho = rho_of(k);
                let ratio = gamma * (1.0 - 2.0 * rho).abs() / (rho * (1.0 - rho));
                if ratio >= slope_bound(rho) {
                    report.violations.push(Violation {
                        k: Some(k),
                        rho,
                        detail: format!("|w'/w| = {ratio:.4} >= {:.4}", slope_bound(rho)),
                    });
                }
            }
            if !report.passed && report.violations.is_empty() {
                report.notes.push(format!(
                    "gamma = {gamma} exceeds 1/2: the slope bound fails for rho near 0 and 1, outside this grid"
                ));
            }
        }
        WeightScheme::CustomScalar { table } => {
            let h = 1.0 / (TABLE_POINTS - 1) as f64;
            for k in grid {
                let rho = rho_of(k);
                let omega = table.eval(rho);
                if !(omega > 0.0) {
                    report.violations.push(Violation { k: Some(k), rho, detail: "w(rho) = 0 inside the grid".into() });
                    continue;
                }
                let (a, b) = ((rho - h).max(0.0), (rho + h).min(1.0));
                let slope = (table.eval(b) - table.eval(a)) / (b - a);
                let ratio = (slope / omega).abs();
                if ratio >= slope_bound(rho) {
                    report.violations.push(Violation {
                        k: Some(k),
                        rho,
                        detail: format!("|w'/w| = {ratio:.4} >= {:.4}", slope_bound(rho)),
                    });
                }
            }
            report.passed = report.violations.is_empty();
        }
        WeightScheme::FisherMatrix => {
            let z = ds.z();
            let (_, bound) = sym_eig_range(&(z.tr_mul(&z) / t as f64));
            match CandidateScan::new(ds, trim) {
                Ok(scan) => {
                    for (k, c) in grid.zip(scan.candidates()) {
                        let rho = rho_of(k);
                        let Some(c) = c else {
                            report.violations.push(Violation { k: Some(k), rho, detail: "Z_k'MZ_k singular".into() });
                            continue;
                        };
                        let (lmin, lmax) = sym_eig_range(&(&c.a / t as f64));
                        if !(lmin > 0.0) {
                            report.violations.push(Violation {
                                k: Some(k),
                                rho,
                                detail: format!("Omega_k not positive definite (min eigenvalue {lmin:e})"),
                            });
                        }
                        if lmax > bound * (1.0 + 1e-8) {
                            report.violations.push(Violation {
                                k: Some(k),
                                rho,
                                detail: format!("||Omega_k|| = {lmax:e} exceeds ||Z'Z/T|| = {bound:e}"),
                            });
                        }
                    }
                }
                Err(e) => report.notes.push(e.to_string()),
            }
            report.passed = report.violations.is_empty() && report.notes.is_empty();
        }
    }
    report
}
