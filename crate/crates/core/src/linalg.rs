//! Small symmetric-matrix helpers.

use nalgebra::{DMatrix, DVector};

/// Eigenvalues below this multiple of the largest one are clipped to zero.
const CLIP_TOL: f64 = 1e-12;

/// Symmetric square root via eigendecomposition, with slightly negative
/// eigenvalues clipped to zero.
pub fn sym_sqrt(a: &DMatrix<f64>) -> DMatrix<f64> {
    if a.nrows() == 1 {
        return DMatrix::from_element(1, 1, a[(0, 0)].max(0.0).sqrt());
    }
    let eig = symmetrize(a).symmetric_eigen();
    let scale = eig.eigenvalues.amax();
    let roots = eig.eigenvalues.map(|l| if l <= CLIP_TOL * scale { 0.0 } else { l.sqrt() });
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn sym_eig_range(a: &DMatrix<f64>) -> (f64, f64) {
    if a.nrows() == 1 {
        return (a[(0, 0)], a[(0, 0)]);
    }
    let ev = symmetrize(a).symmetric_eigenvalues();
    (ev.min(), ev.max())
}

pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// `x' A x`.
pub fn quad_form(a: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    x.dot(&(a * x))
}
