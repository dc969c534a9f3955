use breakpoint_core::simulation::{
    infill_ar_limit, infill_large_break_limit, infill_mean_limit, infill_mean_limit_with, run_mc, run_mc_with,
    ArLimitConfig, EstimatorSpec, Histogram, McCell, McOptions, MeanLimitConfig, Summary, MIN_GRID_N,
};
use breakpoint_core::{Error, WeightScheme};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn mean_cell(rho0: f64, d0: f64) -> McCell {
    McCell::Mean { t: 100, rho0, d0, mu: 4.0, sigma: 1.0 }
}

#[test]
fn mc_is_deterministic_and_consistent() {
    let cells = [mean_cell(0.5, 4.0), McCell::Ar1 { t: 100, rho0: 0.5, mu: 1.0, delta: 5.0, sigma: 1.0, x0: 1.0 }];
    let est = EstimatorSpec::new_and_ls();
    let opts = McOptions { trim: Some(0.1) };
    let a = run_mc_with(&cells, &est, 200, 11, &opts).unwrap();
    let b = run_mc_with(&cells, &est, 200, 11, &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rows.len(), 4);
    for row in &a.rows {
        let s = &row.summary;
        assert_eq!(s.n + row.failures, 200);
        assert!((s.rmse * s.rmse - s.bias * s.bias - s.stderr * s.stderr).abs() < 1e-10);
        assert_eq!(row.histogram.counts.iter().sum::<u64>() as usize, s.n);
    }
    assert!(a.row(0, "NEW").is_some() && a.row(1, "LS").is_some());
    let c = run_mc_with(&cells, &est, 200, 12, &opts).unwrap();
    assert_ne!(a.rows[0].summary, c.rows[0].summary);
}

#[test]
fn reduced_replications_warn() {
    let r = run_mc(&[mean_cell(0.5, 4.0)], &EstimatorSpec::new_and_ls(), 100, 1).unwrap();
    assert_eq!(r.warnings.len(), 1);
    assert!(matches!(
        run_mc(&[mean_cell(0.5, 4.0)], &EstimatorSpec::new_and_ls(), 50, 1),
        Err(Error::InvalidArgument(_))
    ));
    assert!(run_mc(&[mean_cell(1.5, 4.0)], &EstimatorSpec::new_and_ls(), 100, 1).is_err());
    assert!(run_mc(&[mean_cell(0.5, 4.0)], &[], 100, 1).is_err());
}

#[test]
fn degenerate_cells_abort() {
    // no noise and no break: every replicate fails
    let cell = McCell::Mean { t: 50, rho0: 0.5, d0: 0.0, mu: 0.0, sigma: 0.0 };
    assert!(matches!(
        run_mc(&[cell], &EstimatorSpec::new_and_ls(), 100, 1),
        Err(Error::TooManyFailures { .. }) | Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn larger_mean_breaks_are_located_better() {
    let small = infill_mean_limit(0.5, 1.0, &WeightScheme::NEW, 200, 2000, 3).unwrap().summary();
    let large = infill_mean_limit(0.5, 4.0, &WeightScheme::NEW, 200, 2000, 3).unwrap().summary();
    assert!(large.rmse < small.rmse);
}

#[test]
fn finer_grids_barely_move_the_limit() {
    let w = WeightScheme::NEW;
    let coarse = infill_mean_limit(0.3, 2.0, &w, 100, 4000, 8).unwrap().summary();
    let fine = infill_mean_limit(0.3, 2.0, &w, 200, 4000, 8).unwrap().summary();
    assert!((coarse.rmse - fine.rmse).abs() < 0.02);
    let cfg = ArLimitConfig { rho0: 0.5, mu: 1.0, delta: 5.0, j0: 1.0 };
    let a = infill_ar_limit(&cfg, &w, 0.01, 3000, 8).unwrap().summary();
    let b = infill_ar_limit(&cfg, &w, 0.005, 3000, 8).unwrap().summary();
    assert!((a.rmse - b.rmse).abs() < 0.02);
}

#[test]
fn grid_and_argument_checks() {
    let w = WeightScheme::NEW;
    assert!(infill_mean_limit(0.5, 1.0, &w, MIN_GRID_N - 1, 10, 1).is_err());
    assert!(infill_mean_limit(0.0, 1.0, &w, 200, 10, 1).is_err());
    let cfg = ArLimitConfig { rho0: 0.5, mu: 0.0, delta: 0.0, j0: 1.0 };
    assert!(infill_ar_limit(&cfg, &w, 0.02, 10, 1).is_err());
    assert!(infill_ar_limit(&cfg, &WeightScheme::FisherMatrix, 0.01, 10, 1).is_err());
}

#[test]
fn no_break_limit_is_centered() {
    let cfg = ArLimitConfig { rho0: 0.5, mu: 0.0, delta: 0.0, j0: 1.0 };
    for w in [WeightScheme::NEW, WeightScheme::Unit] {
        let s = infill_ar_limit(&cfg, &w, 0.01, 4000, 21).unwrap().summary();
        assert!(s.bias.abs() < 0.02, "{w}: {s:?}");
    }
    let m = infill_mean_limit(0.5, 0.0, &WeightScheme::NEW, 200, 4000, 21).unwrap().summary();
    assert!(m.bias.abs() < 0.02);
}

#[test]
fn fisher_limit_matches_power_half_in_one_dimension() {
    let a = infill_mean_limit(0.3, 2.0, &WeightScheme::FisherMatrix, 100, 500, 4).unwrap();
    let b = infill_mean_limit(0.3, 2.0, &WeightScheme::NEW, 100, 500, 4).unwrap();
    assert_eq!(a.draws, b.draws);
    let cfg = MeanLimitConfig {
        rho0: 0.4,
        d0: DVector::from_vec(vec![1.0, -2.0]),
        sigma_z: Some(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 2.0])),
    };
    let s = infill_mean_limit_with(&cfg, &WeightScheme::FisherMatrix, 100, 500, 4).unwrap().summary();
    assert!(s.rmse < 0.2);
}

#[test]
fn large_break_limit_shape() {
    let draws = infill_large_break_limit(20_000, 5);
    let mut sorted = draws.clone();
    sorted.sort_by(f64::total_cmp);
    assert!(sorted[sorted.len() / 2].abs() < 0.1);
    let zero = draws.iter().filter(|d| **d == 0.0).count() as f64 / draws.len() as f64;
    // only grid discretization puts mass at zero
    assert!(zero < 0.05, "{zero}");
}

#[test]
fn weighting_removes_boundary_mass() {
    let new = infill_mean_limit(0.3, 1.0, &WeightScheme::NEW, 200, 5000, 17).unwrap().histogram();
    let ls = infill_mean_limit(0.3, 1.0, &WeightScheme::Unit, 200, 5000, 17).unwrap().histogram();
    assert!(new.edge_mass(2) < 0.02, "NEW edge mass {}", new.edge_mass(2));
    assert!(ls.edge_mass(2) > 0.10, "LS edge mass {}", ls.edge_mass(2));
}

#[test]
fn histogram_bins() {
    let h = Histogram::from_sample(&[0.0, 0.005, 0.015, 0.999, 1.0]);
    assert_eq!(h.counts.len(), 100);
    assert_eq!(h.counts[0], 2);
    assert_eq!(h.counts[1], 1);
    assert_eq!(h.counts[99], 2);
    let bins: Vec<_> = h.bins().collect();
    assert!((bins[1].0 - 0.01).abs() < 1e-12 && (bins[1].1 - 0.02).abs() < 1e-12);
    assert!((h.edge_mass(1) - 0.8).abs() < 1e-12);
}

proptest! {
    #[test]
    fn summary_identity(draws in prop::collection::vec(0.0f64..1.0, 1..200), truth in 0.0f64..1.0) {
        let s = Summary::from_sample(&draws, truth);
        prop_assert!((s.rmse * s.rmse - s.bias * s.bias - s.stderr * s.stderr).abs() < 1e-10);
        prop_assert!(s.stderr >= 0.0);
    }
}
