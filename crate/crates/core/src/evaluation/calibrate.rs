//! Nested grid search over `(t_d, tau)` on a training partition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{derive_seed, metrics, stratified_folds, EvalError};
use crate::bicluster::BiclusteringParams;
use crate::dataset::{LabeledDataset, CLASS1};
use crate::perceptron::LearnerKind;
use crate::pipeline::{prepare, BicNeuronConfig};

/// Validation AUC credited to a fold where fitting failed; it is what the
/// majority-class fallback scores.
const FAILED_FOLD_AUC: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_d: Vec<f64>,
    pub tau: Vec<f64>,
    pub t_m: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_d: vec![0.5, 0.8, 1.0, 1.5],
            tau: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            t_m: 0.02,
        }
    }
}

impl GridSpec {
    /// Grid points in tie-break order: ascending `t_d`, then ascending `tau`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut t_d = self.t_d.clone();
        t_d.sort_by(f64::total_cmp);
        t_d.dedup();
        let mut tau = self.tau.clone();
        tau.sort_by(f64::total_cmp);
        tau.dedup();
        t_d.iter()
            .flat_map(|&d| tau.iter().map(move |&t| (d, t)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub t_d: f64,
    pub tau: f64,
    /// Mean validation AUC of the winner.
    pub score: f64,
    /// `(t_d, tau, mean AUC)` for every grid point; failed points hold `-inf`.
    pub table: Vec<(f64, f64, f64)>,
}

impl Calibration {
    pub fn config(&self, t_m: f64, learner: LearnerKind) -> BicNeuronConfig {
        BicNeuronConfig::new(self.t_d, t_m, self.tau, learner)
    }
}

/// Picks the grid point with the best mean validation AUC over an inner
/// stratified `inner_k`-fold split of `train`. Only `train` is consulted.
///
/// A fold where fitting fails scores 0.5; a point that fails on every fold
/// scores `-inf`. Ties go to the smaller `t_d`, then the smaller `tau`.
pub fn grid_calibrate(
    train: &LabeledDataset,
    grid: &GridSpec,
    inner_k: usize,
    seed: u64,
    learner: &LearnerKind,
) -> Result<Calibration, EvalError> {
    let points = grid.points();
    if points.is_empty() {
        return Err(EvalError::EmptyGrid);
    }
    let mut t_d_values = grid.t_d.clone();
    t_d_values.sort_by(f64::total_cmp);
    t_d_values.dedup();
    let plan = stratified_folds(train.labels(), inner_k, seed)?;

    let jobs: Vec<(usize, usize)> = (0..inner_k)
        .flat_map(|f| (0..t_d_values.len()).map(move |d| (f, d)))
        .collect();
    // per job: validation AUC for each tau, None when fitting failed
    let results: Vec<Vec<Option<f64>>> = jobs
        .par_iter()
        .map(|&(fold, d)| {
            let t_d = t_d_values[d];
            let inner_train = train.select_rows(&plan.train_indices(fold));
            let validation = train.select_rows(&plan.test_indices(fold));
            let taus: Vec<f64> = points
                .iter()
                .filter(|p| p.0 == t_d)
                .map(|p| p.1)
                .collect();
            let params = BiclusteringParams::new(t_d, grid.t_m);
            let prepared = match prepare(&inner_train, &params, None) {
                Ok(p) => p,
                Err(_) => return vec![None; taus.len()],
            };
            taus.iter()
                .enumerate()
                .map(|(t, &tau)| {
                    let unit = learner.with_seed(derive_seed(seed, &[fold as u64, d as u64, t as u64]));
                    let cfg = BicNeuronConfig::new(t_d, grid.t_m, tau, unit);
                    let model = prepared.finish(tau, &unit, cfg).ok()?;
                    let preds: Vec<i8> = (0..validation.n_rows())
                        .map(|i| model.predict_role(validation.matrix.row(i)))
                        .collect::<Result<_, _>>()
                        .ok()?;
                    metrics(validation.labels(), &preds, CLASS1).ok().map(|r| r.auc)
                })
                .collect()
        })
        .collect();

    let mut table = Vec::with_capacity(points.len());
    for &(t_d, tau) in &points {
        let d = t_d_values.iter().position(|&v| v == t_d).expect("t_d in grid");
        let t = points
            .iter()
            .filter(|p| p.0 == t_d)
            .position(|p| p.1 == tau)
            .expect("tau in grid");
        let per_fold: Vec<Option<f64>> = (0..inner_k)
            .map(|f| results[f * t_d_values.len() + d][t])
            .collect();
        let score = if per_fold.iter().all(Option::is_none) {
            f64::NEG_INFINITY
        } else {
            per_fold
                .iter()
                .map(|a| a.unwrap_or(FAILED_FOLD_AUC))
                .sum::<f64>()
                / inner_k as f64
        };
        table.push((t_d, tau, score));
    }

    let mut best: Option<usize> = None;
    for (i, row) in table.iter().enumerate() {
        if row.2 == f64::NEG_INFINITY {
            continue;
        }
        if best.is_none_or(|b| row.2 > table[b].2) {
            best = Some(i);
        }
    }
    let b = best.ok_or(EvalError::AllConfigurationsFailed)?;
    Ok(Calibration {
        t_d: table[b].0,
        tau: table[b].1,
        score: table[b].2,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_ordered() {
        let g = GridSpec {
            t_d: vec![1.0, 0.5],
            tau: vec![0.9, 0.1],
            t_m: 0.02,
        };
        assert_eq!(
            g.points(),
            vec![(0.5, 0.1), (0.5, 0.9), (1.0, 0.1), (1.0, 0.9)]
        );
    }
}
