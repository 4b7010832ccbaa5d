//! Contrastive bicluster pairs.
//!
//! For a coherent class-1 bicluster `(I, J)`, the contrastive partner is made
//! of the class-2 rows closest to the class-1 centroid on `J`. A good pair has
//! a coherent class-1 side and an incoherent class-2 side, i.e. a small MSR
//! ratio.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bicluster::{join_ids, Bicluster};
use crate::dataset::DataMatrix;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ContrastiveError {
    #[error("the other class has no rows")]
    EmptyOtherClass,
    #[error("dimension mismatch: centroid has {centroid} components, {cols} columns selected")]
    DimensionMismatch { centroid: usize, cols: usize },
}

/// Outcome of the MSR ratio; degenerate pairs are discarded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MsrRatio {
    Value(f64),
    Discard,
}

impl MsrRatio {
    pub fn value(self) -> Option<f64> {
        match self {
            MsrRatio::Value(v) => Some(v),
            MsrRatio::Discard => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContrastivePair {
    /// Coherent bicluster over the class-1 matrix.
    pub b1: Bicluster,
    /// Nearest class-2 rows on the same columns, over the class-2 matrix.
    pub b2: Bicluster,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub ratio: MsrRatio,
}

impl ContrastivePair {
    pub fn cols(&self) -> &[usize] {
        self.b1.cols()
    }

    /// `rows1=<ids> rows2=<ids> cols=<ids> msr1=<v> msr2=<v> ratio=<v>`
    pub fn dump_line(&self, class1: &DataMatrix, class2: &DataMatrix) -> String {
        let ratio = match self.ratio {
            MsrRatio::Value(v) => format!("{v:.6}"),
            MsrRatio::Discard => "discard".to_string(),
        };
        format!(
            "rows1={} rows2={} cols={} msr1={:.6} msr2={:.6} ratio={}",
            join_ids(class1.row_ids(), self.b1.rows()),
            join_ids(class2.row_ids(), self.b2.rows()),
            join_ids(class1.col_ids(), self.b1.cols()),
            self.b1.msr(),
            self.b2.msr(),
            ratio
        )
    }
}

/// Column means of the bicluster rows, in column order.
pub fn centroid(b: &Bicluster, host: &DataMatrix) -> Vec<f64> {
    let mut c = vec![0.0; b.n_cols()];
    for &i in b.rows() {
        let row = host.row(i);
        for (k, &j) in b.cols().iter().enumerate() {
            c[k] += row[j];
        }
    }
    let n = b.n_rows() as f64;
    c.iter_mut().for_each(|v| *v /= n);
    c
}

/// Euclidean distance between `x` restricted to `cols` and `c`.
pub fn subspace_distance(x: &[f64], c: &[f64], cols: &[usize]) -> Result<f64, ContrastiveError> {
    if c.len() != cols.len() {
        return Err(ContrastiveError::DimensionMismatch {
            centroid: c.len(),
            cols: cols.len(),
        });
    }
    Ok(cols
        .iter()
        .zip(c)
        .map(|(&j, &cj)| (x[j] - cj).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// MSR(b1) / MSR(b2); a zero denominator discards the pair.
pub fn msr_ratio(msr1: f64, msr2: f64) -> MsrRatio {
    if msr2 > 0.0 {
        MsrRatio::Value(msr1 / msr2)
    } else {
        MsrRatio::Discard
    }
}

/// Pairs `b1` with the `min(|I|, |R2|)` class-2 rows nearest to its centroid
/// on its columns. Distance ties go to the lower row index.
pub fn generate_contrastive(
    b1: &Bicluster,
    class1: &DataMatrix,
    class2: &DataMatrix,
) -> Result<ContrastivePair, ContrastiveError> {
    if class2.n_rows() == 0 {
        return Err(ContrastiveError::EmptyOtherClass);
    }
    let c1 = centroid(b1, class1);
    let mut ranked: Vec<(f64, usize)> = (0..class2.n_rows())
        .map(|i| Ok((subspace_distance(class2.row(i), &c1, b1.cols())?, i)))
        .collect::<Result<_, ContrastiveError>>()?;
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let k = b1.n_rows().min(class2.n_rows());
    let rows: Vec<usize> = ranked[..k].iter().map(|&(_, i)| i).collect();
    let b2 = Bicluster::new(class2, rows, b1.cols().to_vec())
        .expect("rows and columns are valid for the class-2 matrix");
    let c2 = centroid(&b2, class2);
    let ratio = msr_ratio(b1.msr(), b2.msr());
    Ok(ContrastivePair {
        b1: b1.clone(),
        b2,
        c1,
        c2,
        ratio,
    })
}

/// Keeps non-degenerate pairs with ratio at most `tau`, sorted by ratio
/// (ties by the class-1 bicluster).
pub fn filter_pairs(pairs: &[ContrastivePair], tau: f64) -> Vec<ContrastivePair> {
    let mut kept: Vec<ContrastivePair> = pairs
        .iter()
        .filter(|p| matches!(p.ratio, MsrRatio::Value(r) if r <= tau))
        .cloned()
        .collect();
    kept.sort_by(|a, b| {
        let (ra, rb) = (a.ratio.value().unwrap(), b.ratio.value().unwrap());
        ra.partial_cmp(&rb)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.b1.cmp(&b.b1))
    });
    kept
}
