use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    AnalyticLargeBreak,
    ResidualBootstrap,
    WildBootstrap,
    RecursiveBootstrapAr,
}

/// Interval for the break date, in observation indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower_k: usize,
    pub upper_k: usize,
    pub k_hat: usize,
    pub level: f64,
    pub method: CiMethod,
    /// Bootstrap replications requested.
    pub replications: Option<usize>,
    /// Bootstrap replications dropped after an estimation failure.
    pub failed_replications: Option<usize>,
    /// `L̂` (analytic interval only).
    pub scale: Option<f64>,
    /// `c_α` (analytic interval only).
    pub critical_value: Option<f64>,
}

impl ConfidenceInterval {
    pub fn contains(&self, k: usize) -> bool {
        self.lower_k <= k && k <= self.upper_k
    }

    pub fn width(&self) -> usize {
        self.upper_k - self.lower_k
    }
}
