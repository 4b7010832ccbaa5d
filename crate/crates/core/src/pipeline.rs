//! End-to-end fit and predict.
//!
//! Fitting runs six steps: normalize and split by class; mine class-1
//! biclusters; attach contrastive class-2 partners; keep pairs whose MSR
//! ratio is at most `tau`; train one perceptron per kept pair on its
//! subspace; pick the candidate with the best hard-label AUC over the whole
//! training set.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicluster::{mine_biclusters, Bicluster, BiclusterError, BiclusteringParams};
use crate::contrastive::{filter_pairs, generate_contrastive, ContrastiveError, ContrastivePair};
use crate::dataset::{
    min_max_normalize, split_by_class, ClassSplit, DataMatrix, DatasetError, LabelMap,
    LabeledDataset, Normalizer, CLASS1, CLASS2,
};
use crate::evaluation::metrics;
use crate::perceptron::{LearnerKind, Perceptron, PerceptronError};

/// Version tag written into saved models.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Bicluster(#[from] BiclusterError),
    #[error(transparent)]
    Contrastive(#[from] ContrastiveError),
    #[error(transparent)]
    Perceptron(#[from] PerceptronError),
    #[error("no coherent biclusters found in class 1")]
    NoCoherentBiclusters,
    #[error("no pair of contrastive biclusters passed the ratio threshold")]
    NoDiscriminativeSubspace,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("model i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("model format: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BicNeuronConfig {
    pub biclustering: BiclusteringParams,
    pub tau: f64,
    pub learner: LearnerKind,
}

impl BicNeuronConfig {
    pub fn new(t_d: f64, t_m: f64, tau: f64, learner: LearnerKind) -> Self {
        BicNeuronConfig {
            biclustering: BiclusteringParams::new(t_d, t_m),
            tau,
            learner,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.biclustering.validate()?;
        self.learner.validate()?;
        if !(self.tau > 0.0) {
            return Err(PipelineError::InvalidConfig(format!(
                "tau must be > 0, got {}",
                self.tau
            )));
        }
        Ok(())
    }
}

/// One trained candidate subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub cols: Vec<usize>,
    pub ratio: f64,
    pub auc: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Coherent class-1 biclusters before filtering.
    pub n_biclusters: usize,
    /// Pairs that passed the ratio filter (one candidate each).
    pub n_pairs: usize,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicNeuronModel {
    pub format_version: u32,
    /// Selected subspace, as indices into the original feature columns.
    pub columns: Vec<usize>,
    pub column_ids: Vec<String>,
    pub perceptron: Perceptron,
    pub training_auc: f64,
    pub normalizer: Normalizer,
    pub label_map: LabelMap,
    pub config: BicNeuronConfig,
    pub diagnostics: Diagnostics,
}

impl BicNeuronModel {
    pub fn n_features(&self) -> usize {
        self.normalizer.n_cols()
    }

    fn project(&self, x: &[f64]) -> Result<Vec<f64>, PipelineError> {
        if x.len() != self.n_features() {
            return Err(DatasetError::DimensionMismatch {
                expected: self.n_features(),
                found: x.len(),
            }
            .into());
        }
        Ok(self
            .columns
            .iter()
            .map(|&j| self.normalizer.scale(j, x[j]))
            .collect())
    }

    /// Decision value of the selected perceptron on a raw instance.
    pub fn score(&self, x: &[f64]) -> Result<f64, PipelineError> {
        Ok(self.perceptron.score(&self.project(x)?)?)
    }

    /// Class role (+1 = class 1) for a raw, unnormalized instance.
    pub fn predict_role(&self, x: &[f64]) -> Result<i8, PipelineError> {
        Ok(self.perceptron.predict(&self.project(x)?)?)
    }

    /// Predicted label in the original label alphabet.
    pub fn predict(&self, x: &[f64]) -> Result<&str, PipelineError> {
        let role = self.predict_role(x)?;
        Ok(self.label_map.name(role))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PipelineError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| PipelineError::Format(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| PipelineError::Format(e.to_string()))?;
        match value.get("format_version").and_then(|v| v.as_u64()) {
            Some(v) if v == MODEL_FORMAT_VERSION as u64 => {}
            Some(v) => return Err(PipelineError::Format(format!("unsupported format version {v}"))),
            None => return Err(PipelineError::Format("missing format_version".into())),
        }
        let model: BicNeuronModel =
            serde_json::from_value(value).map_err(|e| PipelineError::Format(e.to_string()))?;
        if model.perceptron.input_dim() != model.columns.len() {
            return Err(PipelineError::Format(
                "perceptron dimension does not match the column subset".into(),
            ));
        }
        Ok(model)
    }
}

/// Output of steps 1-3, reusable across `tau` values and learners.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub normalized: LabeledDataset,
    pub normalizer: Normalizer,
    pub split: ClassSplit,
    pub biclusters: Vec<Bicluster>,
    /// One contrastive pair per bicluster, unfiltered.
    pub pairs: Vec<ContrastivePair>,
}

/// Normalizes, splits, mines class-1 biclusters (or takes `fixtures`, given
/// over the class-1 sub-matrix) and builds their contrastive pairs.
pub fn prepare(
    train: &LabeledDataset,
    params: &BiclusteringParams,
    fixtures: Option<&[Bicluster]>,
) -> Result<Prepared, PipelineError> {
    let (matrix, normalizer) = min_max_normalize(&train.matrix);
    let normalized = train.with_matrix(matrix)?;
    let split = split_by_class(&normalized)?;
    let biclusters = match fixtures {
        Some(b) => b.to_vec(),
        None => mine_biclusters(&split.class1, params)?,
    };
    if biclusters.is_empty() {
        return Err(PipelineError::NoCoherentBiclusters);
    }
    let pairs = biclusters
        .iter()
        .map(|b| generate_contrastive(b, &split.class1, &split.class2))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Prepared {
        normalized,
        normalizer,
        split,
        biclusters,
        pairs,
    })
}

/// Class-1 rows of `pair` (role +1) followed by its class-2 rows (role -1),
/// projected onto the pair's columns.
pub fn subspace_dataset(pair: &ContrastivePair, split: &ClassSplit) -> LabeledDataset {
    let cols = pair.cols();
    let mut values = Vec::with_capacity((pair.b1.n_rows() + pair.b2.n_rows()) * cols.len());
    let mut row_ids = Vec::new();
    let mut labels = Vec::new();
    for (host, rows, role) in [
        (&split.class1, pair.b1.rows(), CLASS1),
        (&split.class2, pair.b2.rows(), CLASS2),
    ] {
        for &i in rows {
            values.extend(host.project_row(i, cols));
            row_ids.push(host.row_ids()[i].clone());
            labels.push(role);
        }
    }
    let col_ids = cols.iter().map(|&j| split.class1.col_ids()[j].clone()).collect();
    let matrix = DataMatrix::new(values, labels.len(), cols.len(), row_ids, col_ids)
        .expect("subspace rows come from a valid matrix");
    LabeledDataset::new(matrix, labels, LabelMap::default()).expect("roles are +1/-1")
}

/// Hard-label AUC of `model` over every row of `full_train` projected onto
/// `cols`, class 1 positive.
pub fn candidate_auc(
    model: &Perceptron,
    cols: &[usize],
    full_train: &LabeledDataset,
) -> Result<f64, PipelineError> {
    let preds = (0..full_train.n_rows())
        .map(|i| model.predict(&full_train.matrix.project_row(i, cols)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(metrics(full_train.labels(), &preds, CLASS1)
        .expect("lengths match and data is non-empty")
        .auc)
}

impl Prepared {
    /// Steps 4-6 for one `tau` and learner.
    pub fn finish(
        &self,
        tau: f64,
        learner: &LearnerKind,
        config: BicNeuronConfig,
    ) -> Result<BicNeuronModel, PipelineError> {
        let kept = filter_pairs(&self.pairs, tau);
        if kept.is_empty() {
            return Err(PipelineError::NoDiscriminativeSubspace);
        }
        let trained = kept
            .par_iter()
            .map(|pair| {
                let data = subspace_dataset(pair, &self.split);
                let model = learner.train(&data)?;
                let auc = candidate_auc(&model, pair.cols(), &self.normalized)?;
                Ok((model, auc))
            })
            .collect::<Result<Vec<_>, PipelineError>>()?;

        let mut best = 0;
        for k in 1..kept.len() {
            let (a, b) = (&kept[k], &kept[best]);
            let better = trained[k].1 > trained[best].1
                || (trained[k].1 == trained[best].1
                    && (a.cols().len(), a.cols()) < (b.cols().len(), b.cols()));
            if better {
                best = k;
            }
        }
        let candidates = kept
            .iter()
            .zip(&trained)
            .map(|(p, (_, auc))| Candidate {
                cols: p.cols().to_vec(),
                ratio: p.ratio.value().unwrap_or(f64::NAN),
                auc: *auc,
            })
            .collect();
        let columns = kept[best].cols().to_vec();
        let column_ids = columns
            .iter()
            .map(|&j| self.normalized.matrix.col_ids()[j].clone())
            .collect();
        let (perceptron, training_auc) = trained.into_iter().nth(best).expect("best exists");
        Ok(BicNeuronModel {
            format_version: MODEL_FORMAT_VERSION,
            columns,
            column_ids,
            perceptron,
            training_auc,
            normalizer: self.normalizer.clone(),
            label_map: self.normalized.label_map.clone(),
            config,
            diagnostics: Diagnostics {
                n_biclusters: self.biclusters.len(),
                n_pairs: kept.len(),
                candidates,
            },
        })
    }
}

pub fn fit(train: &LabeledDataset, cfg: &BicNeuronConfig) -> Result<BicNeuronModel, PipelineError> {
    cfg.validate()?;
    prepare(train, &cfg.biclustering, None)?.finish(cfg.tau, &cfg.learner, *cfg)
}

/// Like [`fit`], but with class-1 biclusters supplied by the caller instead of
/// mined. Biclusters index the class-1 sub-matrix (class-1 rows in original
/// order).
pub fn fit_with_biclusters(
    train: &LabeledDataset,
    cfg: &BicNeuronConfig,
    biclusters: &[Bicluster],
) -> Result<BicNeuronModel, PipelineError> {
    cfg.validate()?;
    prepare(train, &cfg.biclustering, Some(biclusters))?.finish(cfg.tau, &cfg.learner, *cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perceptron::StandardPerceptron;

    fn toy() -> LabeledDataset {
        let rows = vec![
            vec![0.1, 0.2, 0.3],
            vec![0.2, 0.3, 0.4],
            vec![0.4, 0.5, 0.6],
            vec![0.9, 0.1, 0.5],
            vec![0.3, 0.8, 0.2],
            vec![0.7, 0.6, 0.9],
        ];
        LabeledDataset::new(
            DataMatrix::from_rows(&rows).unwrap(),
            vec![1, 1, 1, -1, -1, -1],
            LabelMap {
                class1: "yes".into(),
                class2: "no".into(),
            },
        )
        .unwrap()
    }

    #[test]
    fn tau_filters_everything() {
        let d = toy();
        let b = Bicluster::new(&d.matrix.select_rows(&[0, 1, 2]), vec![0, 1, 2], vec![0, 1]).unwrap();
        let params = BiclusteringParams::new(1.0, 0.02);
        let prepared = prepare(&d, &params, Some(std::slice::from_ref(&b))).unwrap();
        let r = prepared.pairs[0].ratio.value().unwrap();
        assert!(r > 0.0);
        let strict = BicNeuronConfig::new(1.0, 0.02, r / 2.0, LearnerKind::standard(1));
        assert!(matches!(
            fit_with_biclusters(&d, &strict, std::slice::from_ref(&b)),
            Err(PipelineError::NoDiscriminativeSubspace)
        ));
        let loose = BicNeuronConfig::new(1.0, 0.02, r, LearnerKind::standard(1));
        let model = fit_with_biclusters(&d, &loose, &[b]).unwrap();
        assert_eq!(model.diagnostics.n_pairs, 1);
        assert_eq!(model.columns, vec![0, 1]);
    }

    #[test]
    fn empty_fixture_list() {
        let d = toy();
        let cfg = BicNeuronConfig::new(1.0, 0.02, 0.5, LearnerKind::standard(1));
        assert!(matches!(
            fit_with_biclusters(&d, &cfg, &[]),
            Err(PipelineError::NoCoherentBiclusters)
        ));
    }

    #[test]
    fn all_class2_model_scores_half() {
        let d = toy();
        let p = Perceptron::Standard(StandardPerceptron {
            weights: vec![0.0, 0.0, -1.0],
            learning_rate: 0.1,
            epochs: 1,
            seed: 0,
            updates: 0,
        });
        assert_eq!(candidate_auc(&p, &[0, 1], &d).unwrap(), 0.5);
    }

    #[test]
    fn wrong_dimension_and_zero_score() {
        let d = toy();
        let cfg = BicNeuronConfig::new(1.0, 0.02, 10.0, LearnerKind::standard(1));
        let b = Bicluster::new(&d.matrix.select_rows(&[0, 1, 2]), vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        let mut model = fit_with_biclusters(&d, &cfg, &[b]).unwrap();
        assert!(model.predict(&[0.1]).is_err());
        // force a zero decision value: maps to the class-2 label
        model.perceptron = Perceptron::Standard(StandardPerceptron {
            weights: vec![0.0; model.columns.len() + 1],
            learning_rate: 0.1,
            epochs: 1,
            seed: 0,
            updates: 0,
        });
        assert_eq!(model.score(&[0.1, 0.2, 0.3]).unwrap(), 0.0);
        assert_eq!(model.predict(&[0.1, 0.2, 0.3]).unwrap(), "no");
    }

    #[test]
    fn save_load_round_trip() {
        let d = toy();
        let cfg = BicNeuronConfig::new(1.0, 0.02, 10.0, LearnerKind::kernel_rbf(0.1));
        let b = Bicluster::new(&d.matrix.select_rows(&[0, 1, 2]), vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        let model = fit_with_biclusters(&d, &cfg, &[b]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        model.save(&path).unwrap();
        assert_eq!(BicNeuronModel::load(&path).unwrap(), model);
        let bad = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 99");
        assert!(matches!(
            BicNeuronModel::from_json(&bad),
            Err(PipelineError::Format(_))
        ));
    }
}
