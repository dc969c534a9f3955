//! The law of `argmax_u {W(u) - |u|/2}` for a two-sided Wiener process `W`,
//! simulated on a grid. Each side is a random walk with increments
//! `N(-h/2, h)`; a side stops at the horizon or once it has fallen
//! `DROP_STOP` below its running maximum (it returns above that maximum
//! with probability `e^{-DROP_STOP}`).

use std::sync::OnceLock;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::seeds;

pub const ARGMAX_STEP: f64 = 0.01;
pub const ARGMAX_HORIZON: f64 = 400.0;
pub const ARGMAX_PATHS: usize = 1_000_000;
pub const ARGMAX_SEED: u64 = 0x5EED_A59A_0B1D_2019;
pub const DROP_STOP: f64 = 12.0;

/// `c(level)` for levels 0.80, 0.90, 0.95, 0.99 from
/// `simulate_argmax(ARGMAX_PATHS, ARGMAX_SEED, ARGMAX_STEP, ARGMAX_HORIZON)`.
pub const CACHED_QUANTILES: [(f64, f64); 4] = [(0.80, 4.69), (0.90, 7.70), (0.95, 11.06), (0.99, 19.74)];

/// Location of the maximum of one side, in grid steps, and the maximum itself.
fn one_side<R: Rng + ?Sized>(rng: &mut R, step: f64, n_steps: usize) -> (usize, f64) {
    let sd = step.sqrt();
    let drift = -0.5 * step;
    let (mut s, mut best, mut arg) = (0.0f64, 0.0f64, 0usize);
    for j in 1..=n_steps {
        let z: f64 = rng.sample(StandardNormal);
        s += sd * z + drift;
        if s > best {
            best = s;
            arg = j;
        } else if s < best - DROP_STOP {
            break;
        }
    }
    (arg, best)
}

/// One draw of the discretized argmax. Exact ties (both sides never rise above 0)
/// give 0.
pub fn argmax_draw<R: Rng + ?Sized>(rng: &mut R, step: f64, horizon: f64) -> f64 {
    let n_steps = (horizon / step).round() as usize;
    let (arg_left, max_left) = one_side(rng, step, n_steps);
    let (arg_right, max_right) = one_side(rng, step, n_steps);
    if max_left > max_right {
        -(arg_left as f64) * step
    } else {
        arg_right as f64 * step
    }
}

/// `n` independent draws; draw `i` uses seed `derive(seed, [i])`.
pub fn simulate_argmax(n: usize, seed: u64, step: f64, horizon: f64) -> Vec<f64> {
    (0..n)
        .into_par_iter()
        .map(|i| argmax_draw(&mut seeds::rng(seeds::derive(seed, &[i as u64])), step, horizon))
        .collect()
}

/// Empirical `level`-quantile of `|draws|`: the `(1+level)/2` quantile of the
/// symmetric signed law.
pub fn abs_quantile(draws: &[f64], level: f64) -> f64 {
    let mut a: Vec<f64> = draws.iter().map(|v| v.abs()).collect();
    a.sort_by(f64::total_cmp);
    a[quantile_index(a.len(), level)]
}

/// Index `⌈level·n⌉ - 1` into a sorted sample of size `n`.
pub fn quantile_index(n: usize, level: f64) -> usize {
    ((level * n as f64 - 1e-9).ceil() as usize).clamp(1, n) - 1
}

fn reference_sample() -> &'static [f64] {
    static SAMPLE: OnceLock<Vec<f64>> = OnceLock::new();
    SAMPLE.get_or_init(|| simulate_argmax(ARGMAX_PATHS, ARGMAX_SEED, ARGMAX_STEP, ARGMAX_HORIZON))
}

/// `c_α` such that `P(|argmax| ≤ c) = level`, i.e. the `(1+level)/2` quantile of
/// the argmax law. Levels in the cached table are returned directly; other
/// levels simulate the reference sample once per process.
pub fn argmax_w_quantile(level: f64) -> f64 {
    if let Some(&(_, c)) = CACHED_QUANTILES.iter().find(|(l, _)| (l - level).abs() < 1e-12) {
        return c;
    }
    abs_quantile(reference_sample(), level)
}
