use thiserror::Error;

/// Errors raised by the regression, estimation and inference routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular design: smallest singular value {smallest:e} is below 1e-10 x largest {largest:e}")]
    SingularDesign { smallest: f64, largest: f64 },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("candidate k = {k} outside admissible range [{lo}, {hi}]")]
    CandidateOutOfRange { k: usize, lo: usize, hi: usize },

    #[error("Z_k'MZ_k is rank-deficient at k = {k}")]
    SingularSubsample { k: usize },

    #[error("weight matrix is {rows}x{cols}, expected {q}x{q}")]
    WeightShapeMismatch { rows: usize, cols: usize, q: usize },

    #[error("invalid weight scheme: {0}")]
    InvalidWeight(String),

    #[error("trim must lie in (0, 1/2), got {0}")]
    InvalidTrim(f64),

    #[error("trimmed candidate grid is empty (T = {t}, trim = {trim})")]
    EmptyGrid { t: usize, trim: f64 },

    #[error("AllCandidatesSingular: no candidate in [{lo}, {hi}] yields a usable objective")]
    AllCandidatesSingular { lo: usize, hi: usize },

    #[error("sub-sample has zero regressor variation at k = {k}")]
    DegenerateSubsample { k: usize },

    #[error("break magnitude quadratic form {0:e} is not positive")]
    ZeroMagnitude(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{failed} of {total} replicates failed, above the {limit_pct}% limit")]
    TooManyFailures { failed: usize, total: usize, limit_pct: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
