//! Declarative run configurations. A config file (TOML, or a JSON report with a
//! `config` key) is loaded first; command-line flags then override it.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use breakpoint_core::inference::{BootstrapMethod, UEstimator};
use breakpoint_core::simulation::{EstimatorSpec, McCell};
use breakpoint_core::WeightScheme;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// A weight scheme kept in its textual form (`unit`, `new`, `fisher`, `power:0.3`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct WeightSpec(WeightScheme);

impl WeightSpec {
    pub fn scheme(&self) -> &WeightScheme {
        &self.0
    }
}

impl FromStr for WeightSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.parse::<WeightScheme>().map(Self).map_err(|e| e.to_string())
    }
}

impl TryFrom<String> for WeightSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<WeightSpec> for String {
    fn from(w: WeightSpec) -> String {
        w.0.to_string()
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Break-date interval request: `none`, `analytic`, or `<residual|wild|recursive>:<B>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CiSpec {
    None,
    Analytic,
    Bootstrap { method: BootstrapMethod, replications: usize },
}

impl FromStr for CiSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "none" => return Ok(Self::None),
            "analytic" => return Ok(Self::Analytic),
            _ => {}
        }
        let (name, b) = s
            .split_once(':')
            .ok_or_else(|| format!("unknown interval spec '{s}' (none, analytic, residual:B, wild:B, recursive:B)"))?;
        let method = match name.trim() {
            "residual" => BootstrapMethod::Residual,
            "wild" => BootstrapMethod::Wild,
            "recursive" => BootstrapMethod::RecursiveAr,
            other => return Err(format!("unknown bootstrap method '{other}'")),
        };
        let replications = b.trim().parse().map_err(|_| format!("bad replication count in '{s}'"))?;
        Ok(Self::Bootstrap { method, replications })
    }
}

impl TryFrom<String> for CiSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<CiSpec> for String {
    fn from(c: CiSpec) -> String {
        c.to_string()
    }
}

impl fmt::Display for CiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => f.write_str("none"),
            Self::Analytic => f.write_str("analytic"),
            Self::Bootstrap { method, replications } => {
                let name = match method {
                    BootstrapMethod::Residual => "residual",
                    BootstrapMethod::Wild => "wild",
                    BootstrapMethod::RecursiveAr => "recursive",
                };
                write!(f, "{name}:{replications}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Linear regression with user-chosen break and stable regressors.
    #[default]
    Regression,
    /// Pure AR(1) in the response, no intercept.
    Ar1,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DeltaCov {
    #[default]
    Iid,
    Hac,
}

impl DeltaCov {
    pub fn estimator(self, t: usize) -> UEstimator {
        match self {
            Self::Iid => UEstimator::Iid,
            Self::Hac => UEstimator::hac_default(t),
        }
    }
}

/// Resolved configuration of `estimate` and `ci`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub response: String,
    /// Regressors whose coefficients break; `const` is the intercept unless the file has such a column.
    pub break_cols: Vec<String>,
    pub stable_cols: Vec<String>,
    /// Number of response lags to construct as `<response>_lag<j>`.
    pub lags: usize,
    pub model: ModelKind,
    pub weight: WeightSpec,
    pub trim: f64,
    pub ci: CiSpec,
    pub level: f64,
    pub delta_cov: DeltaCov,
    pub seed: u64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            input: None,
            response: "y".into(),
            break_cols: vec!["const".into()],
            stable_cols: Vec::new(),
            lags: 0,
            model: ModelKind::Regression,
            weight: WeightSpec(WeightScheme::NEW),
            trim: breakpoint_core::estimators::DEFAULT_TRIM,
            ci: CiSpec::None,
            level: 0.95,
            delta_cov: DeltaCov::Iid,
            seed: 0,
        }
    }
}

impl EstimateConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.input.is_none() {
            return Err(CliError::Config("no input file given".into()));
        }
        if self.response.is_empty() {
            return Err(CliError::Config("no response column given".into()));
        }
        if self.model == ModelKind::Regression && self.break_cols.is_empty() {
            return Err(CliError::Config("at least one break column is required".into()));
        }
        if let Some(c) = self.break_cols.iter().find(|c| self.stable_cols.contains(c)) {
            return Err(CliError::Config(format!("column '{c}' is both a break and a stable regressor")));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(CliError::Config(format!("level must lie in (0, 1), got {}", self.level)));
        }
        if !(self.trim > 0.0 && self.trim < 0.5) {
            return Err(CliError::Config(format!("trim must lie in (0, 0.5), got {}", self.trim)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorEntry {
    pub label: String,
    pub weight: WeightSpec,
}

impl From<&EstimatorEntry> for EstimatorSpec {
    fn from(e: &EstimatorEntry) -> Self {
        EstimatorSpec::new(e.label.clone(), e.weight.scheme().clone())
    }
}

fn default_estimators() -> Vec<EstimatorEntry> {
    vec![
        EstimatorEntry { label: "NEW".into(), weight: WeightSpec(WeightScheme::NEW) },
        EstimatorEntry { label: "LS".into(), weight: WeightSpec(WeightScheme::Unit) },
    ]
}

fn default_reps() -> usize {
    5000
}

/// Finite-sample Monte Carlo study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    /// Trimming fraction; absent means every candidate date.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trim: Option<f64>,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorEntry>,
    pub cells: Vec<McCell>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum InfillCell {
    /// Small mean shift, limit on a grid of `grid_n` points.
    Mean { rho0: f64, d0: f64 },
    /// Local-to-unity AR(1), Euler–Maruyama with step `grid_h`.
    Ar1 {
        rho0: f64,
        mu: f64,
        delta: f64,
        #[serde(default = "one")]
        j0: f64,
    },
    /// `argmax_u {W(u) - |u|/2}`; estimators are ignored.
    LargeBreak,
}

fn default_grid_n() -> usize {
    200
}

fn default_grid_h() -> f64 {
    0.005
}

/// In-fill limit study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfillConfig {
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
    #[serde(default = "default_grid_h")]
    pub grid_h: f64,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorEntry>,
    pub cells: Vec<InfillCell>,
}

pub fn estimators_of(entries: &[EstimatorEntry]) -> Vec<EstimatorSpec> {
    entries.iter().map(EstimatorSpec::from).collect()
}

/// Reads a TOML config, or the `config` object of a JSON report.
pub fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let bad = |e: String| CliError::Config(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|e| e == "json") {
        let mut v: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let cfg = match v.get_mut("config") {
            Some(c) => c.take(),
            None => v,
        };
        serde_json::from_value(cfg).map_err(|e| bad(e.to_string()))
    } else {
        toml::from_str(&text).map_err(|e| bad(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ci_spec_round_trip() {
        for s in ["none", "analytic", "residual:199", "wild:499", "recursive:99"] {
            assert_eq!(s.parse::<CiSpec>().unwrap().to_string(), s);
        }
        assert!("wild".parse::<CiSpec>().is_err());
        assert!("jackknife:10".parse::<CiSpec>().is_err());
    }

    #[test]
    fn weight_spec_normalizes() {
        assert_eq!("new".parse::<WeightSpec>().unwrap().to_string(), "power:0.5");
        assert_eq!("ls".parse::<WeightSpec>().unwrap().to_string(), "unit");
    }

    #[test]
    fn estimate_config_toml_round_trip() {
        let cfg = EstimateConfig {
            input: Some("data.csv".into()),
            ci: "wild:499".parse().unwrap(),
            ..Default::default()
        };
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(toml::from_str::<EstimateConfig>(&text).unwrap(), cfg);
        assert!(toml::from_str::<EstimateConfig>("bogus = 1").is_err());
    }

    #[test]
    fn simulate_config_parses() {
        let text = r#"
            reps = 200
            seed = 3
            [[cells]]
            model = "mean"
            T = 100
            rho0 = 0.5
            d0 = 4.0
            mu = 4.0
            [[cells]]
            model = "ar1"
            T = 200
            rho0 = 0.5
            mu = 1.0
            delta = 5.0
        "#;
        let cfg: SimulateConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.cells.len(), 2);
        assert_eq!(cfg.estimators.len(), 2);
        let back: SimulateConfig = toml::from_str(&toml::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
