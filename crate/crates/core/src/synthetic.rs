//! Synthetic datasets with a known discriminative subspace.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{DataMatrix, LabelMap, LabeledDataset, CLASS1, CLASS2};

/// Shape of a planted-subspace dataset.
#[derive(Debug, Clone)]
pub struct PlantedSpec {
    pub class1_rows: usize,
    pub class2_rows: usize,
    pub n_features: usize,
    pub n_planted: usize,
    /// Row offsets are drawn from `[0, row_offset_span)`.
    pub row_offset_span: f64,
    /// Column offsets cycle through this list across planted columns.
    pub col_offsets: Vec<f64>,
    /// Additive noise is drawn from `[-noise, noise]`.
    pub noise: f64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        PlantedSpec {
            class1_rows: 40,
            class2_rows: 60,
            n_features: 12,
            n_planted: 4,
            row_offset_span: 0.4,
            col_offsets: vec![0.0, 0.6],
            noise: 0.01,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub data: LabeledDataset,
    /// Planted column indices, ascending.
    pub planted: Vec<usize>,
}

/// Class 1 follows `B(i,j) = a_i + b_j + e` on the planted columns and is
/// uniform on `[0, 1)` elsewhere; class 2 is uniform everywhere. Rows are
/// interleaved at random.
pub fn planted_subspace(spec: &PlantedSpec, seed: u64) -> Planted {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut planted = sample(&mut rng, spec.n_features, spec.n_planted).into_vec();
    planted.sort_unstable();
    let n = spec.class1_rows + spec.class2_rows;
    let mut roles: Vec<i8> = std::iter::repeat_n(CLASS1, spec.class1_rows)
        .chain(std::iter::repeat_n(CLASS2, spec.class2_rows))
        .collect();
    rand::seq::SliceRandom::shuffle(roles.as_mut_slice(), &mut rng);

    let mut values = Vec::with_capacity(n * spec.n_features);
    for &role in &roles {
        let row_offset = rng.gen_range(0.0..spec.row_offset_span);
        for j in 0..spec.n_features {
            let v = match planted.iter().position(|&p| p == j) {
                Some(k) if role == CLASS1 => {
                    let col_offset = spec.col_offsets[k % spec.col_offsets.len()];
                    row_offset + col_offset + rng.gen_range(-spec.noise..=spec.noise)
                }
                _ => rng.gen_range(0.0..1.0),
            };
            values.push(v);
        }
    }
    let matrix = DataMatrix::new(
        values,
        n,
        spec.n_features,
        (0..n).map(|i| format!("s{i}")).collect(),
        (0..spec.n_features).map(|j| format!("f{j}")).collect(),
    )
    .expect("generated values are finite");
    Planted {
        data: LabeledDataset::new(matrix, roles, planted_labels()).expect("valid roles"),
        planted,
    }
}

/// Both classes uniform on `[0, 1)`: no subspace separates them.
pub fn uniform_noise(class1_rows: usize, class2_rows: usize, n_features: usize, seed: u64) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = class1_rows + class2_rows;
    let values = (0..n * n_features).map(|_| rng.gen_range(0.0..1.0)).collect();
    let roles = std::iter::repeat_n(CLASS1, class1_rows)
        .chain(std::iter::repeat_n(CLASS2, class2_rows))
        .collect();
    let matrix = DataMatrix::new(
        values,
        n,
        n_features,
        (0..n).map(|i| format!("s{i}")).collect(),
        (0..n_features).map(|j| format!("f{j}")).collect(),
    )
    .expect("generated values are finite");
    LabeledDataset::new(matrix, roles, planted_labels()).expect("valid roles")
}

fn planted_labels() -> LabelMap {
    LabelMap {
        class1: "planted".to_string(),
        class2: "noise".to_string(),
    }
}

/// Writes `data` as CSV with an `id` column first and a `label` column last.
pub fn write_csv(data: &LabeledDataset, path: impl AsRef<std::path::Path>) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["id".to_string()];
    header.extend(data.matrix.col_ids().iter().cloned());
    header.push("label".to_string());
    w.write_record(&header)?;
    for i in 0..data.n_rows() {
        let mut rec = vec![data.matrix.row_ids()[i].clone()];
        rec.extend(data.matrix.row(i).iter().map(|v| format!("{v}")));
        rec.push(data.label_map.name(data.labels()[i]).to_string());
        w.write_record(&rec)?;
    }
    w.flush()
}
