mod common;

use breakpoint_core::linreg::{annihilate, ols_fit, ssr_decomposition_check, Projector};
use breakpoint_core::Dataset;
use common::{naive_gain, random_dataset, rng};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian_matrix(seed: u64, rows: usize, cols: usize) -> DMatrix<f64> {
    let mut r = rng(seed);
    DMatrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_identity(seed in any::<u64>(), t in 12usize..60, p in 1usize..4, frac in 0.0f64..1.0) {
        let ds = random_dataset(seed, t, p, &[0], t / 2, 0.7);
        let k = p + ((t - 2 * p) as f64 * frac) as usize;
        let d = ssr_decomposition_check(&ds, k).unwrap();
        prop_assert!(d.relative_gap() < 1e-10, "gap {}", d.relative_gap());
        prop_assert!(d.v_k_sq >= 0.0 && d.s_k >= 0.0);
    }

    #[test]
    fn gain_matches_two_naive_fits(seed in any::<u64>(), t in 12usize..40, k_frac in 0.2f64..0.8) {
        let ds = random_dataset(seed, t, 2, &[1], t / 3, 1.0);
        let k = ((t as f64) * k_frac) as usize;
        let d = ssr_decomposition_check(&ds, k).unwrap();
        let oracle = naive_gain(&ds, k);
        prop_assert!((d.v_k_sq - oracle).abs() <= 1e-8 * d.sbar.max(1.0));
    }

    #[test]
    fn annihilator_is_idempotent(seed in any::<u64>(), t in 5usize..50, p in 1usize..4) {
        prop_assume!(t > p);
        let x = gaussian_matrix(seed, t, p);
        let v = DVector::from_iterator(t, gaussian_matrix(seed ^ 1, t, 1).iter().copied());
        let mv = annihilate(&x, &v).unwrap();
        let mmv = annihilate(&x, &mv).unwrap();
        prop_assert!((&mmv - &mv).amax() < 1e-10 * v.norm().max(1.0));
        prop_assert!(x.tr_mul(&mv).amax() < 1e-10 * v.norm().max(1.0) * x.norm());
    }

    #[test]
    fn residuals_orthogonal(seed in any::<u64>(), t in 5usize..50, p in 1usize..4) {
        prop_assume!(t > p);
        let x = gaussian_matrix(seed, t, p);
        let y = DVector::from_iterator(t, gaussian_matrix(seed ^ 7, t, 1).iter().copied());
        let fit = ols_fit(&x, &y).unwrap();
        for c in x.column_iter() {
            prop_assert!(c.dot(&fit.residuals).abs() <= 1e-8 * y.norm() * c.norm().max(1.0));
        }
        prop_assert!((fit.ssr - fit.residuals.norm_squared()).abs() < 1e-12 * fit.ssr.max(1.0));
    }

    /// Z_k'MZ_k = R'(X_k'X_k)(X'X)⁻¹(X'X - X_k'X_k)R and the two-branch form of Z₀'MZ_k.
    #[test]
    fn partitioned_rearrangements(seed in any::<u64>(), t in 12usize..30, p in 1usize..4, a in 0.2f64..0.8, b in 0.2f64..0.8) {
        let cols: Vec<usize> = (0..p).filter(|c| c % 2 == 0).collect();
        let ds = random_dataset(seed, t, p, &cols, t / 2, 0.5);
        let (k0, k) = (((t as f64) * a) as usize, ((t as f64) * b) as usize);
        let proj = Projector::new(ds.x()).unwrap();
        let r = ds.selection();
        let x = ds.x();
        let gram = |k: usize| {
            let xk = x_k(x, k);
            xk.tr_mul(&xk)
        };
        let xx_inv = x.tr_mul(x).try_inverse().unwrap();
        let xx = x.tr_mul(x);

        let mzk = proj.annihilate_matrix(&ds.z_k(k));
        let direct = mzk.tr_mul(&mzk);
        let rearranged = r.transpose() * gram(k) * &xx_inv * (&xx - gram(k)) * &r;
        prop_assert!((&direct - &rearranged).amax() <= 1e-8 * direct.amax().max(1.0));

        let cross = proj.annihilate_matrix(&ds.z_k(k0)).tr_mul(&mzk);
        let formula = if k <= k0 {
            r.transpose() * gram(k0) * &xx_inv * (&xx - gram(k)) * &r
        } else {
            r.transpose() * (&xx - gram(k0)) * &xx_inv * gram(k) * &r
        };
        prop_assert!((&cross - &formula).amax() <= 1e-8 * cross.amax().max(1.0));
    }

    /// With every coefficient breaking (R = I):
    /// (Z₀'MZ_k)(Z_k'MZ_k)⁻¹ = R'(X₀'MX_k)(X_k'MX_k)⁻¹R.
    #[test]
    fn partitioned_product_pure_change(seed in any::<u64>(), t in 12usize..30, p in 1usize..4, a in 0.25f64..0.75, b in 0.25f64..0.75) {
        let cols: Vec<usize> = (0..p).collect();
        let ds = random_dataset(seed, t, p, &cols, t / 2, 0.5);
        let (k0, k) = (((t as f64) * a) as usize, ((t as f64) * b) as usize);
        let proj = Projector::new(ds.x()).unwrap();
        let r = ds.selection();
        let mz0 = proj.annihilate_matrix(&ds.z_k(k0));
        let mzk = proj.annihilate_matrix(&ds.z_k(k));
        let lhs = mz0.tr_mul(&mzk) * mzk.tr_mul(&mzk).try_inverse().unwrap();
        let mx0 = proj.annihilate_matrix(&x_k(ds.x(), k0));
        let mxk = proj.annihilate_matrix(&x_k(ds.x(), k));
        let rhs = r.transpose() * mx0.tr_mul(&mxk) * mxk.tr_mul(&mxk).try_inverse().unwrap() * &r;
        prop_assert!((&lhs - &rhs).amax() <= 1e-8 * lhs.amax().max(1.0));
    }
}

fn x_k(x: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let mut m = x.clone();
    m.rows_mut(0, k).fill(0.0);
    m
}

#[test]
fn mean_model_gain_is_scaled_mean_difference() {
    // Σ(y - ȳ)² = S(k)² + T·[k/T(1-k/T)(ȳ* - ȳ)²] in the mean model
    let mut r = rng(11);
    let y: Vec<f64> = (0..30).map(|s| r.sample::<f64, _>(StandardNormal) + if s >= 12 { 1.0 } else { 0.0 }).collect();
    let ds = Dataset::mean_model(&y).unwrap();
    let t = y.len() as f64;
    for k in 1..30 {
        let d = ssr_decomposition_check(&ds, k).unwrap();
        let pre = y[..k].iter().sum::<f64>() / k as f64;
        let post = y[k..].iter().sum::<f64>() / (30 - k) as f64;
        let rho = k as f64 / t;
        let v2_sec2 = rho * (1.0 - rho) * (post - pre).powi(2);
        let total: f64 = {
            let m = y.iter().sum::<f64>() / t;
            y.iter().map(|v| (v - m).powi(2)).sum()
        };
        assert!((total - d.s_k - t * v2_sec2).abs() < 1e-10 * total);
        assert!((d.v_k_sq - t * v2_sec2).abs() < 1e-10 * total);
    }
}
