//! Metrics, cross-validation folds, hyperparameter calibration and the exact
//! Wilcoxon signed-rank test.

mod calibrate;
mod folds;
mod metrics;
mod wilcoxon;

pub use calibrate::{grid_calibrate, Calibration, GridSpec};
pub use folds::{derive_seed, stratified_folds, FoldPlan};
pub use metrics::{metrics, score_auc, MetricReport};
pub use wilcoxon::{wilcoxon_exact, MAX_EXACT_N};

/// Default significance level for pairwise comparisons.
pub const SIGNIFICANCE_LEVEL: f64 = 0.01;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EvalError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no observations")]
    Empty,
    #[error("exact test supports at most {MAX_EXACT_N} pairs, got {0}")]
    ExactRegimeExceeded(usize),
    #[error("fold count must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("class {class} has {size} instances, fewer than k = {k}")]
    ClassSmallerThanK { class: i8, size: usize, k: usize },
    #[error("grid has no points")]
    EmptyGrid,
    #[error("every grid configuration failed on every fold")]
    AllConfigurationsFailed,
}
