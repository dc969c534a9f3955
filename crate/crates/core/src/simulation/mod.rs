//! Data-generating processes, the Monte Carlo harness and in-fill limit samplers.

mod dgp;
mod infill;
mod mc;
mod summary;

pub use dgp::{
    ar1_break_series, ar_params_from_betas, break_index, gen_ar1_break, gen_mean_break, mean_break_series,
    ArBreakConfig, MeanBreakConfig,
};
pub use infill::{
    infill_ar_limit, infill_large_break_limit, infill_mean_limit, infill_mean_limit_with, ArLimitConfig,
    LimitSample, MeanLimitConfig, MIN_GRID_N,
};
pub use mc::{run_mc, run_mc_with, EstimatorSpec, McCell, McOptions, McReport, McRow, FULL_REPS, MAX_FAILURE_SHARE};
pub use summary::{Histogram, Summary, BIN_WIDTH};
