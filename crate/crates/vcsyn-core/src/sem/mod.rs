//! Two-latent-variable covariance-structure model.
//!
//! Social Capital is measured by up to four network indicators and
//! Performance by up to six financial indicators; the structural part
//! regresses Performance on Social Capital. Estimation minimizes the
//! maximum-likelihood discrepancy between the sample covariance matrix and
//! the model-implied covariance by quasi-Newton descent, with variances
//! optimized in log space so they stay positive.

mod covariance;
mod fit;
mod model;
mod optimizer;
mod simulate;

pub use covariance::{fml, sample_covariance};
pub use fit::{fit, fit_with_start, stars, ParamRecord, SemFit};
pub use model::{
    build_model, implied_covariance, ModelSpec, PerfIndicator, ScIndicator, SemParams,
};
pub use optimizer::{minimize, BfgsOptions, BfgsOutcome};
pub use simulate::{derive_seed, simulate};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SemError {
    #[error("ZERO_VARIANCE: column `{0}` is constant")]
    ZeroVariance(String),
    #[error("RANK_DEFICIENT: {n} rows cannot identify {p} indicators")]
    RankDeficient { n: usize, p: usize },
    #[error("NOT_PD: matrix is not positive definite")]
    NotPd,
    #[error("INVALID_PARAM: {0}")]
    InvalidParam(String),
    #[error("INVALID_MODEL: model id must be 1..=4, got {0}")]
    InvalidModel(u8),
    #[error("dimension mismatch: expected {expected}x{expected}, got {got}x{got}")]
    Dimension { expected: usize, got: usize },
    #[error("indicator column `{0}` missing from matrix")]
    MissingColumn(String),
}
