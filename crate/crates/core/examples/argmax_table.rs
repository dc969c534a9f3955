//! Regenerates the cached `c_α` table: `cargo run --release --example argmax_table [seed]`.

use breakpoint_core::inference::argmax::{
    abs_quantile, simulate_argmax, ARGMAX_HORIZON, ARGMAX_PATHS, ARGMAX_SEED, ARGMAX_STEP,
};

fn main() {
    let seed = std::env::args().nth(1).map_or(ARGMAX_SEED, |s| s.parse().expect("seed must be an integer"));
    let draws = simulate_argmax(ARGMAX_PATHS, seed, ARGMAX_STEP, ARGMAX_HORIZON);
    for level in [0.80, 0.90, 0.95, 0.99] {
        println!("({level:.2}, {:.4}),", abs_quantile(&draws, level));
    }
}
