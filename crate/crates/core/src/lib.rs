//! Estimation of a single structural break date in linear regression and AR(1)
//! models, using least squares or a weighted objective that down-weights
//! candidate dates near the ends of the sample.
//!
//! * [`linreg`]: OLS, annihilator projections, SSR decomposition.
//! * [`estimators`]: weight schemes and break-date estimators.
//! * [`inference`]: break magnitude, analytic and bootstrap intervals.
//! * [`simulation`]: data-generating processes, Monte Carlo and in-fill limit samplers.

pub mod error;
pub mod estimators;
pub mod inference;
pub mod linalg;
pub mod linreg;
pub mod seeds;
pub mod simulation;

pub use error::{Error, Result};
pub use estimators::{estimate_break, estimate_break_ar1, BreakFit, WeightScheme};
pub use linreg::Dataset;
