use nalgebra::DMatrix;

use crate::linalg::symmetrize;

/// Newey–West default bandwidth `⌊4(T/100)^{2/9}⌋`.
pub fn newey_west_bandwidth(t: usize) -> usize {
    (4.0 * (t as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Bartlett-kernel long-run variance of the rows of `g` (T×q):
/// `Γ₀ + Σ_{l=1}^{L} (1 - l/(L+1)) (Γ_l + Γ_l')` with `Γ_l = T⁻¹ Σ_t g_t g_{t-l}'`.
/// The rows are not demeaned.
pub fn long_run_variance(g: &DMatrix<f64>, bandwidth: usize) -> DMatrix<f64> {
    let (t, q) = g.shape();
    let gamma = |l: usize| {
        let mut m = DMatrix::<f64>::zeros(q, q);
        for s in l..t {
            for i in 0..q {
                for j in 0..q {
                    m[(i, j)] += g[(s, i)] * g[(s - l, j)];
                }
            }
        }
        m / t as f64
    };
    let mut lrv = gamma(0);
    for l in 1..=bandwidth.min(t.saturating_sub(1)) {
        let w = 1.0 - l as f64 / (bandwidth as f64 + 1.0);
        let gl = gamma(l);
        lrv += (&gl + gl.transpose()) * w;
    }
    symmetrize(&lrv)
}
