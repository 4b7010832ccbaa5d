//! Perceptrons trained on the subspaces of contrastive coherent biclusters.
//!
//! The pipeline mines additive-coherent biclusters in the minority class,
//! pairs each with the nearest majority-class rows on the same columns, keeps
//! pairs whose mean squared residue ratio is small, and trains a perceptron
//! on the best such subspace. Standard and kernel perceptron baselines, a
//! stratified cross-validation harness and an exact Wilcoxon signed-rank test
//! are included for comparison.
//!
//! ```
//! use bicneuron::dataset::{DataMatrix, LabelMap, LabeledDataset};
//! use bicneuron::pipeline::{fit_with_biclusters, BicNeuronConfig};
//! use bicneuron::perceptron::LearnerKind;
//! use bicneuron::bicluster::Bicluster;
//!
//! let rows = vec![
//!     vec![0.1, 0.2, 0.9], vec![0.2, 0.3, 0.1], vec![0.3, 0.4, 0.5],
//!     vec![0.9, 0.1, 0.2], vec![0.1, 0.9, 0.8], vec![0.6, 0.2, 0.4],
//!     vec![0.8, 0.7, 0.3],
//! ];
//! let labels = vec![1, 1, 1, -1, -1, -1, -1];
//! let data = LabeledDataset::new(
//!     DataMatrix::from_rows(&rows).unwrap(),
//!     labels,
//!     LabelMap { class1: "pos".into(), class2: "neg".into() },
//! ).unwrap();
//! // indices refer to the class-1 rows, in order
//! let class1 = bicneuron::dataset::split_by_class(&data).unwrap().class1;
//! let b = Bicluster::new(&class1, vec![0, 1, 2], vec![0, 1]).unwrap();
//! let cfg = BicNeuronConfig::new(1.0, 0.02, 0.9, LearnerKind::kernel_linear());
//! let model = fit_with_biclusters(&data, &cfg, &[b]).unwrap();
//! assert_eq!(model.columns, vec![0, 1]);
//! ```

pub mod bicluster;
pub mod config;
pub mod contrastive;
pub mod dataset;
pub mod evaluation;
pub mod experiment;
pub mod perceptron;
pub mod pipeline;
pub mod synthetic;

pub use bicluster::{mine_biclusters, msr, Bicluster, BiclusterError, BiclusteringParams};
pub use contrastive::{ContrastivePair, MsrRatio};
pub use dataset::{load_csv, DataMatrix, DatasetError, LabelMap, LabeledDataset};
pub use evaluation::{metrics, stratified_folds, wilcoxon_exact, EvalError, MetricReport};
pub use perceptron::{Kernel, LearnerKind, Perceptron};
pub use pipeline::{fit, BicNeuronConfig, BicNeuronModel, PipelineError};
