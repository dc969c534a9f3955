//! Inference on the break: magnitude with sandwich covariance, the analytic
//! large-break interval and bootstrap intervals.

mod analytic;
pub mod argmax;
mod bootstrap;
mod ci;
mod delta;
mod hac;

pub use analytic::{analytic_ci, analytic_interval, large_break_scale};
pub use argmax::argmax_w_quantile;
pub use bootstrap::{bootstrap_ci, draw_errors, BootstrapMethod, MAX_FAILURE_SHARE};
pub use ci::{CiMethod, ConfidenceInterval};
pub use delta::{estimate_delta, estimate_delta_at, DeltaEstimate, UEstimator};
pub use hac::{long_run_variance, newey_west_bandwidth};
