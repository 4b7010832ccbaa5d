//! Standard (primal, online) and kernel (dual) perceptrons.
//!
//! Both use `sign(0) = -1`: a zero decision value predicts the class-2 role.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, CLASS1, CLASS2};

pub const DEFAULT_EPOCHS: usize = 20;
pub const DEFAULT_LEARNING_RATE: f64 = 0.1;
pub const DEFAULT_SIGMA: f64 = 0.1;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PerceptronError {
    #[error("training data is empty")]
    EmptyData,
    #[error("epochs must be at least 1")]
    ZeroEpochs,
    #[error("learning rate must be positive, got {0}")]
    NonPositiveLearningRate(f64),
    #[error("rbf sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[inline]
pub fn sign(score: f64) -> i8 {
    if score > 0.0 {
        CLASS1
    } else {
        CLASS2
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel {
    /// Plain dot product, no bias term.
    Linear,
    /// `exp(-|a - b|² / (2σ²))`
    Rbf { sigma: f64 },
}

impl Kernel {
    pub fn validate(&self) -> Result<(), PerceptronError> {
        match *self {
            Kernel::Rbf { sigma } if !(sigma > 0.0) => Err(PerceptronError::NonPositiveSigma(sigma)),
            _ => Ok(()),
        }
    }

    #[inline]
    fn apply(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => dot(a, b),
            Kernel::Rbf { sigma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-d2 / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> Result<f64, PerceptronError> {
        self.validate()?;
        if a.len() != b.len() {
            return Err(PerceptronError::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(self.apply(a, b))
    }
}

/// Linear perceptron; the last weight multiplies a constant 1 input (bias).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardPerceptron {
    pub weights: Vec<f64>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Number of weight updates made during training.
    pub updates: usize,
}

impl StandardPerceptron {
    /// Online training from zero weights, visiting the rows in a freshly
    /// shuffled order each epoch.
    pub fn train(
        data: &LabeledDataset,
        learning_rate: f64,
        epochs: usize,
        seed: u64,
    ) -> Result<Self, PerceptronError> {
        if !(learning_rate > 0.0) {
            return Err(PerceptronError::NonPositiveLearningRate(learning_rate));
        }
        if epochs == 0 {
            return Err(PerceptronError::ZeroEpochs);
        }
        let n = data.n_rows();
        if n == 0 {
            return Err(PerceptronError::EmptyData);
        }
        let dim = data.n_cols();
        let mut w = vec![0.0; dim + 1];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        let mut updates = 0;
        for _ in 0..epochs {
            order.shuffle(&mut rng);
            for &k in &order {
                let x = data.matrix.row(k);
                let y = data.labels()[k];
                let score = dot(&w[..dim], x) + w[dim];
                if sign(score) != y {
                    let step = learning_rate * y as f64;
                    for (wj, xj) in w[..dim].iter_mut().zip(x) {
                        *wj += step * xj;
                    }
                    w[dim] += step;
                    updates += 1;
                }
            }
        }
        Ok(StandardPerceptron {
            weights: w,
            learning_rate,
            epochs,
            seed,
            updates,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.weights.len() - 1
    }

    /// Raw decision value `w·[x; 1]`.
    pub fn score(&self, x: &[f64]) -> Result<f64, PerceptronError> {
        let dim = self.input_dim();
        if x.len() != dim {
            return Err(PerceptronError::DimensionMismatch {
                expected: dim,
                found: x.len(),
            });
        }
        Ok(dot(&self.weights[..dim], x) + self.weights[dim])
    }

    pub fn predict(&self, x: &[f64]) -> Result<i8, PerceptronError> {
        self.score(x).map(sign)
    }
}

/// Dual-form perceptron storing its training instances and mistake counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelPerceptron {
    pub alphas: Vec<u32>,
    pub instances: Vec<Vec<f64>>,
    pub labels: Vec<i8>,
    pub kernel: Kernel,
    pub epochs: usize,
}

impl KernelPerceptron {
    /// Mistake-driven training in dataset order; no shuffling.
    pub fn train(
        data: &LabeledDataset,
        kernel: Kernel,
        epochs: usize,
    ) -> Result<Self, PerceptronError> {
        kernel.validate()?;
        if epochs == 0 {
            return Err(PerceptronError::ZeroEpochs);
        }
        let n = data.n_rows();
        if n == 0 {
            return Err(PerceptronError::EmptyData);
        }
        let instances: Vec<Vec<f64>> = (0..n).map(|i| data.matrix.row(i).to_vec()).collect();
        let labels = data.labels().to_vec();
        let mut gram = vec![0.0; n * n];
        for a in 0..n {
            for b in a..n {
                let k = kernel.apply(&instances[a], &instances[b]);
                gram[a * n + b] = k;
                gram[b * n + a] = k;
            }
        }
        let mut alphas = vec![0u32; n];
        for _ in 0..epochs {
            for k in 0..n {
                let score: f64 = (0..n)
                    .filter(|&l| alphas[l] > 0)
                    .map(|l| alphas[l] as f64 * labels[l] as f64 * gram[l * n + k])
                    .sum();
                if sign(score) != labels[k] {
                    alphas[k] += 1;
                }
            }
        }
        Ok(KernelPerceptron {
            alphas,
            instances,
            labels,
            kernel,
            epochs,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.instances.first().map_or(0, Vec::len)
    }

    pub fn updates(&self) -> usize {
        self.alphas.iter().map(|&a| a as usize).sum()
    }

    /// `Σ_l α_l y_l K(x_l, x)`
    pub fn score(&self, x: &[f64]) -> Result<f64, PerceptronError> {
        let dim = self.input_dim();
        if x.len() != dim {
            return Err(PerceptronError::DimensionMismatch {
                expected: dim,
                found: x.len(),
            });
        }
        Ok(self
            .alphas
            .iter()
            .zip(&self.instances)
            .zip(&self.labels)
            .filter(|((&a, _), _)| a > 0)
            .map(|((&a, xl), &yl)| a as f64 * yl as f64 * self.kernel.apply(xl, x))
            .sum())
    }

    pub fn predict(&self, x: &[f64]) -> Result<i8, PerceptronError> {
        self.score(x).map(sign)
    }
}

/// Which perceptron to train, with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LearnerKind {
    Standard {
        learning_rate: f64,
        epochs: usize,
        seed: u64,
    },
    Kernel {
        kernel: Kernel,
        epochs: usize,
    },
}

impl LearnerKind {
    pub fn standard(seed: u64) -> Self {
        LearnerKind::Standard {
            learning_rate: DEFAULT_LEARNING_RATE,
            epochs: DEFAULT_EPOCHS,
            seed,
        }
    }

    pub fn kernel_linear() -> Self {
        LearnerKind::Kernel {
            kernel: Kernel::Linear,
            epochs: DEFAULT_EPOCHS,
        }
    }

    pub fn kernel_rbf(sigma: f64) -> Self {
        LearnerKind::Kernel {
            kernel: Kernel::Rbf { sigma },
            epochs: DEFAULT_EPOCHS,
        }
    }

    /// Same learner with a different shuffle seed (no-op for kernel kinds).
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            LearnerKind::Standard {
                learning_rate,
                epochs,
                ..
            } => LearnerKind::Standard {
                learning_rate,
                epochs,
                seed,
            },
            other => other,
        }
    }

    pub fn validate(&self) -> Result<(), PerceptronError> {
        match *self {
            LearnerKind::Standard {
                learning_rate,
                epochs,
                ..
            } => {
                if !(learning_rate > 0.0) {
                    return Err(PerceptronError::NonPositiveLearningRate(learning_rate));
                }
                if epochs == 0 {
                    return Err(PerceptronError::ZeroEpochs);
                }
                Ok(())
            }
            LearnerKind::Kernel { kernel, epochs } => {
                if epochs == 0 {
                    return Err(PerceptronError::ZeroEpochs);
                }
                kernel.validate()
            }
        }
    }

    pub fn train(&self, data: &LabeledDataset) -> Result<Perceptron, PerceptronError> {
        match *self {
            LearnerKind::Standard {
                learning_rate,
                epochs,
                seed,
            } => StandardPerceptron::train(data, learning_rate, epochs, seed).map(Perceptron::Standard),
            LearnerKind::Kernel { kernel, epochs } => {
                KernelPerceptron::train(data, kernel, epochs).map(Perceptron::Kernel)
            }
        }
    }
}

/// A trained perceptron of either kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perceptron {
    Standard(StandardPerceptron),
    Kernel(KernelPerceptron),
}

impl Perceptron {
    pub fn score(&self, x: &[f64]) -> Result<f64, PerceptronError> {
        match self {
            Perceptron::Standard(p) => p.score(x),
            Perceptron::Kernel(p) => p.score(x),
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<i8, PerceptronError> {
        self.score(x).map(sign)
    }

    pub fn input_dim(&self) -> usize {
        match self {
            Perceptron::Standard(p) => p.input_dim(),
            Perceptron::Kernel(p) => p.input_dim(),
        }
    }
}
