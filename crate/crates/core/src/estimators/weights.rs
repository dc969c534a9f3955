use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of points in the uniform ρ-grid of a tabulated weight.
pub const TABLE_POINTS: usize = 1024;

/// Scalar weight ω(ρ) tabulated on `TABLE_POINTS` equally spaced points of [0, 1]
/// and linearly interpolated in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedWeight {
    values: Vec<f64>,
}

impl TabulatedWeight {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() != TABLE_POINTS {
            return Err(Error::InvalidWeight(format!(
                "tabulated weight needs {TABLE_POINTS} points, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidWeight("tabulated weight must be finite and nonnegative".into()));
        }
        if values[0] != 0.0 || values[TABLE_POINTS - 1] != 0.0 {
            return Err(Error::InvalidWeight("tabulated weight must vanish at rho = 0 and rho = 1".into()));
        }
        Ok(Self { values })
    }

    /// Tabulate `f` on the grid. The end points are forced to zero.
    pub fn from_fn(f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = TABLE_POINTS - 1;
        let values = (0..TABLE_POINTS)
            .map(|i| if i == 0 || i == n { 0.0 } else { f(i as f64 / n as f64) })
            .collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, rho: f64) -> f64 {
        let n = (TABLE_POINTS - 1) as f64;
        let pos = rho.clamp(0.0, 1.0) * n;
        let i = (pos.floor() as usize).min(TABLE_POINTS - 2);
        let frac = pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// How candidate dates are weighted in the break objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightScheme {
    /// ω = 1: plain least squares.
    Unit,
    /// ω(ρ) = (ρ(1-ρ))^γ.
    PowerConcave { gamma: f64 },
    /// Ω_k = T⁻¹ Z_k'MZ_k.
    FisherMatrix,
    CustomScalar { table: TabulatedWeight },
}

/// Whether an estimate comes from the unweighted objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ls,
    Weighted,
}

impl WeightScheme {
    /// ω(ρ) = (ρ(1-ρ))^{1/2}.
    pub const NEW: WeightScheme = WeightScheme::PowerConcave { gamma: 0.5 };

    pub fn power(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidWeight(format!("power exponent must be >= 0, got {gamma}")));
        }
        Ok(Self::PowerConcave { gamma })
    }

    pub fn custom(table: TabulatedWeight) -> Self {
        Self::CustomScalar { table }
    }

    /// ω(ρ) for scalar schemes, `None` for the matrix scheme.
    pub fn scalar(&self, rho: f64) -> Option<f64> {
        match self {
            Self::Unit => Some(1.0),
            Self::PowerConcave { gamma } => Some((rho * (1.0 - rho)).max(0.0).powf(*gamma)),
            Self::FisherMatrix => None,
            Self::CustomScalar { table } => Some(table.eval(rho)),
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, Self::FisherMatrix)
    }

    pub fn method(&self) -> Method {
        match self {
            Self::Unit => Method::Ls,
            Self::PowerConcave { gamma } if *gamma == 0.0 => Method::Ls,
            _ => Method::Weighted,
        }
    }

    pub fn description(&self) -> String {
        match self {
            Self::Unit => "unit weight (least squares)".into(),
            Self::PowerConcave { gamma } => format!("omega(rho) = (rho(1-rho))^{gamma}"),
            Self::FisherMatrix => "Omega_k = Z_k'MZ_k / T".into(),
            Self::CustomScalar { .. } => format!("tabulated omega(rho) on {TABLE_POINTS} points"),
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unit => write!(f, "unit"),
            Self::PowerConcave { gamma } => write!(f, "power:{gamma}"),
            Self::FisherMatrix => write!(f, "fisher"),
            Self::CustomScalar { .. } => write!(f, "custom"),
        }
    }
}

/// Parses `unit`, `ls`, `new`, `fisher`, `power:<gamma>`.
impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "unit" | "ls" => Ok(Self::Unit),
            "new" => Ok(Self::NEW),
            "fisher" => Ok(Self::FisherMatrix),
            _ => {
                let gamma = s
                    .strip_prefix("power:")
                    .ok_or_else(|| Error::InvalidWeight(format!("unknown weight spec '{s}'")))?;
                let gamma: f64 = gamma
                    .parse()
                    .map_err(|_| Error::InvalidWeight(format!("bad power exponent '{gamma}'")))?;
                Self::power(gamma)
            }
        }
    }
}
