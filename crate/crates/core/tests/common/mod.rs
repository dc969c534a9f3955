#![allow(dead_code)]

use breakpoint_core::Dataset;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SSR of `y` on the columns `cols` (row-major rows), by Gauss–Jordan on the
/// normal equations. Deliberately naive: an oracle independent of the QR code.
pub fn naive_ssr(rows: &[Vec<f64>], y: &[f64]) -> f64 {
    let m = rows[0].len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (r, &yt) in rows.iter().zip(y) {
        for i in 0..m {
            for j in 0..m {
                a[i][j] += r[i] * r[j];
            }
            a[i][m] += r[i] * yt;
        }
    }
    for c in 0..m {
        let piv = (c..m).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for i in 0..m {
            if i != c {
                let f = a[i][c];
                let pivot_row = a[c].clone();
                for (v, pv) in a[i].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    let b: Vec<f64> = a.iter().map(|r| r[m]).collect();
    rows.iter()
        .zip(y)
        .map(|(r, yt)| {
            let fit: f64 = r.iter().zip(&b).map(|(x, c)| x * c).sum();
            (yt - fit).powi(2)
        })
        .sum()
}

/// `S̄ - S(k)²` from two naive regressions: `y` on `X`, and `y` on `[X | Z_k]`.
pub fn naive_gain(ds: &Dataset, k: usize) -> f64 {
    let (t, p) = (ds.t(), ds.p());
    let y: Vec<f64> = ds.y().iter().copied().collect();
    let base: Vec<Vec<f64>> = (0..t).map(|s| (0..p).map(|c| ds.x()[(s, c)]).collect()).collect();
    let full: Vec<Vec<f64>> = (0..t)
        .map(|s| {
            let mut r = base[s].clone();
            r.extend(ds.break_cols().iter().map(|&c| if s >= k { ds.x()[(s, c)] } else { 0.0 }));
            r
        })
        .collect();
    naive_ssr(&base, &y) - naive_ssr(&full, &y)
}

/// Random dataset with an intercept in column 0, `p - 1` Gaussian regressors,
/// break columns `break_cols`, and a break of size `delta` at `k0`.
pub fn random_dataset(seed: u64, t: usize, p: usize, break_cols: &[usize], k0: usize, delta: f64) -> Dataset {
    let mut r = rng(seed);
    let mut x = DMatrix::from_element(t, p, 1.0);
    for c in 1..p {
        for s in 0..t {
            x[(s, c)] = r.sample(StandardNormal);
        }
    }
    let y = DVector::from_fn(t, |s, _| {
        let mut v: f64 = r.sample(StandardNormal);
        for c in 0..p {
            v += 0.5 * x[(s, c)];
        }
        if s >= k0 {
            for &c in break_cols {
                v += delta * x[(s, c)];
            }
        }
        v
    });
    Dataset::new(y, x, break_cols.to_vec()).unwrap()
}

pub fn assert_close(a: f64, b: f64, rel: f64, what: &str) {
    let scale = a.abs().max(b.abs()).max(1.0);
    assert!((a - b).abs() <= rel * scale, "{what}: {a} vs {b}");
}
