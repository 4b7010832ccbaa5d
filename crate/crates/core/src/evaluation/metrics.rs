//! Hard-label classification metrics.

use serde::{Deserialize, Serialize};

use super::EvalError;

/// Accuracy figures for one set of predictions. The minority class plays the
/// positive role in the confusion counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub acc: f64,
    pub acc_minor: f64,
    pub acc_major: f64,
    /// `(TPR + TNR) / 2`, the area under the single-threshold ROC curve.
    pub auc: f64,
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
    /// Set when one class is absent from `y_true`; its accuracy is then 1.
    pub missing_class: bool,
}

pub fn metrics(y_true: &[i8], y_pred: &[i8], minority: i8) -> Result<MetricReport, EvalError> {
    if y_true.len() != y_pred.len() {
        return Err(EvalError::LengthMismatch(y_true.len(), y_pred.len()));
    }
    if y_true.is_empty() {
        return Err(EvalError::Empty);
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == minority, p == minority) {
            (true, true) => tp += 1,
            (true, false) => fn_ += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    let acc_minor = ratio(tp, tp + fn_);
    let acc_major = ratio(tn, tn + fp);
    Ok(MetricReport {
        acc: (tp + tn) as f64 / y_true.len() as f64,
        acc_minor,
        acc_major,
        auc: (acc_minor + acc_major) / 2.0,
        tp,
        tn,
        fp,
        fn_,
        missing_class: tp + fn_ == 0 || tn + fp == 0,
    })
}

/// Rank-based (Mann-Whitney) AUC of real-valued scores, ties counted as one
/// half. Diagnostic only; model selection uses the hard-label AUC.
pub fn score_auc(y_true: &[i8], scores: &[f64], positive: i8) -> Result<f64, EvalError> {
    if y_true.len() != scores.len() {
        return Err(EvalError::LengthMismatch(y_true.len(), scores.len()));
    }
    let pos: Vec<f64> = y_true
        .iter()
        .zip(scores)
        .filter(|(&t, _)| t == positive)
        .map(|(_, &s)| s)
        .collect();
    let neg: Vec<f64> = y_true
        .iter()
        .zip(scores)
        .filter(|(&t, _)| t != positive)
        .map(|(_, &s)| s)
        .collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut wins = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (pos.len() * neg.len()) as f64)
}
