//! Additive-coherence biclustering.
//!
//! A bicluster is a row subset × column subset of a host matrix. Its quality
//! is the mean squared residue (MSR) against the additive model
//! `B(i,j) = B(I,j) + B(i,J) - B(I,J)`; a perfectly coherent bicluster has
//! MSR 0. Mining starts from per-column hierarchical-clustering seeds, then
//! expands, refines and merges them under an MSR ceiling.

mod dendrogram;
mod search;

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::DataMatrix;

pub use dendrogram::{build_dendrogram, cut_dendrogram, Dendrogram, Merge};
pub use search::{expand, merge_all, mine_biclusters, refine};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BiclusterError {
    #[error("cell ({row}, {col}) is not inside the bicluster")]
    IndexOutOfBicluster { row: usize, col: usize },
    #[error("empty row or column selection")]
    EmptySelection,
    #[error("index {index} out of range for axis of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix {rows}x{cols} is smaller than the minimum bicluster size {min_rows}x{min_cols}")]
    MatrixTooSmall {
        rows: usize,
        cols: usize,
        min_rows: usize,
        min_cols: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("cannot parse bicluster line: {0}")]
    Parse(String),
}

/// Thresholds controlling bicluster mining.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiclusteringParams {
    /// Dendrogram cut height for seed generation.
    pub t_d: f64,
    /// MSR ceiling.
    pub t_m: f64,
    pub min_rows: usize,
    pub min_cols: usize,
}

impl BiclusteringParams {
    pub fn new(t_d: f64, t_m: f64) -> Self {
        BiclusteringParams {
            t_d,
            t_m,
            min_rows: 2,
            min_cols: 2,
        }
    }

    pub fn validate(&self) -> Result<(), BiclusterError> {
        if !(self.t_d > 0.0) {
            return Err(BiclusterError::InvalidParams(format!("t_d must be > 0, got {}", self.t_d)));
        }
        if !(self.t_m > 0.0) {
            return Err(BiclusterError::InvalidParams(format!("t_m must be > 0, got {}", self.t_m)));
        }
        if self.min_rows < 1 || self.min_cols < 1 {
            return Err(BiclusterError::InvalidParams("minimum sizes must be >= 1".into()));
        }
        Ok(())
    }
}

impl Default for BiclusteringParams {
    fn default() -> Self {
        BiclusteringParams::new(1.0, 0.02)
    }
}

/// Row and column index sets over a host matrix, with the cached MSR.
///
/// Index sets are kept sorted and duplicate-free. Equality and ordering only
/// look at the index sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bicluster {
    rows: Vec<usize>,
    cols: Vec<usize>,
    msr: f64,
}

impl Bicluster {
    pub fn new(
        host: &DataMatrix,
        mut rows: Vec<usize>,
        mut cols: Vec<usize>,
    ) -> Result<Self, BiclusterError> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        let msr = msr(host, &rows, &cols)?;
        Ok(Bicluster { rows, cols, msr })
    }

    /// For index sets already known to be sorted, unique and in range.
    pub(crate) fn from_sorted(host: &DataMatrix, rows: Vec<usize>, cols: Vec<usize>) -> Self {
        let msr = msr_unchecked(host, &rows, &cols);
        Bicluster { rows, cols, msr }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn msr(&self) -> f64 {
        self.msr
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn volume(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    /// True when both index sets of `self` are subsets of `other`'s.
    pub fn is_contained_in(&self, other: &Bicluster) -> bool {
        is_subset(&self.rows, &other.rows) && is_subset(&self.cols, &other.cols)
    }

    pub fn overlaps(&self, other: &Bicluster) -> bool {
        intersects(&self.rows, &other.rows) && intersects(&self.cols, &other.cols)
    }

    /// `rows=<ids> cols=<ids> msr=<value>` using the host's identifiers.
    pub fn dump_line(&self, host: &DataMatrix) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "rows={} cols={} msr={:.6}",
            join_ids(host.row_ids(), &self.rows),
            join_ids(host.col_ids(), &self.cols),
            self.msr
        );
        s
    }

    /// Parses the `rows=... cols=...` part of a dump line against `host`.
    /// Any `msr=` field is ignored and recomputed.
    pub fn parse_line(line: &str, host: &DataMatrix) -> Result<Self, BiclusterError> {
        let mut rows = None;
        let mut cols = None;
        for field in line.split_whitespace() {
            if let Some(v) = field.strip_prefix("rows=") {
                rows = Some(lookup_ids(host.row_ids(), v)?);
            } else if let Some(v) = field.strip_prefix("cols=") {
                cols = Some(lookup_ids(host.col_ids(), v)?);
            }
        }
        match (rows, cols) {
            (Some(r), Some(c)) => Bicluster::new(host, r, c),
            _ => Err(BiclusterError::Parse(line.to_string())),
        }
    }
}

impl PartialEq for Bicluster {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}

impl Eq for Bicluster {}

impl PartialOrd for Bicluster {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bicluster {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rows
            .cmp(&other.rows)
            .then_with(|| self.cols.cmp(&other.cols))
    }
}

pub(crate) fn join_ids(ids: &[String], idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| ids[i].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

fn lookup_ids(ids: &[String], list: &str) -> Result<Vec<usize>, BiclusterError> {
    list.split(',')
        .filter(|s| !s.is_empty())
        .map(|name| {
            ids.iter()
                .position(|id| id == name)
                .ok_or_else(|| BiclusterError::Parse(format!("unknown identifier {name:?}")))
        })
        .collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => return true,
        }
    }
    false
}

fn check_selection(host: &DataMatrix, rows: &[usize], cols: &[usize]) -> Result<(), BiclusterError> {
    if rows.is_empty() || cols.is_empty() {
        return Err(BiclusterError::EmptySelection);
    }
    if let Some(&i) = rows.iter().find(|&&i| i >= host.n_rows()) {
        return Err(BiclusterError::IndexOutOfRange {
            index: i,
            len: host.n_rows(),
        });
    }
    if let Some(&j) = cols.iter().find(|&&j| j >= host.n_cols()) {
        return Err(BiclusterError::IndexOutOfRange {
            index: j,
            len: host.n_cols(),
        });
    }
    Ok(())
}

/// Row means, column means and overall mean of the selection.
struct Means {
    rows: Vec<f64>,
    cols: Vec<f64>,
    all: f64,
}

fn means(host: &DataMatrix, rows: &[usize], cols: &[usize]) -> Means {
    let mut row_means = vec![0.0; rows.len()];
    let mut col_means = vec![0.0; cols.len()];
    let mut all = 0.0;
    for (a, &i) in rows.iter().enumerate() {
        let r = host.row(i);
        for (b, &j) in cols.iter().enumerate() {
            let v = r[j];
            row_means[a] += v;
            col_means[b] += v;
            all += v;
        }
    }
    let (nr, nc) = (rows.len() as f64, cols.len() as f64);
    row_means.iter_mut().for_each(|m| *m /= nc);
    col_means.iter_mut().for_each(|m| *m /= nr);
    Means {
        rows: row_means,
        cols: col_means,
        all: all / (nr * nc),
    }
}

/// Residue of cell `(row, col)` within the selection `rows × cols`.
pub fn residue(
    host: &DataMatrix,
    rows: &[usize],
    cols: &[usize],
    row: usize,
    col: usize,
) -> Result<f64, BiclusterError> {
    check_selection(host, rows, cols)?;
    let a = rows
        .iter()
        .position(|&i| i == row)
        .ok_or(BiclusterError::IndexOutOfBicluster { row, col })?;
    let b = cols
        .iter()
        .position(|&j| j == col)
        .ok_or(BiclusterError::IndexOutOfBicluster { row, col })?;
    let m = means(host, rows, cols);
    Ok(host.get(row, col) - m.cols[b] - m.rows[a] + m.all)
}

/// Mean squared residue of the selection `rows × cols`.
pub fn msr(host: &DataMatrix, rows: &[usize], cols: &[usize]) -> Result<f64, BiclusterError> {
    check_selection(host, rows, cols)?;
    Ok(msr_unchecked(host, rows, cols))
}

pub(crate) fn msr_unchecked(host: &DataMatrix, rows: &[usize], cols: &[usize]) -> f64 {
    let row_scores = row_residue_scores(host, rows, cols);
    row_scores.iter().sum::<f64>() / rows.len() as f64
}

/// Per-row mean squared residue `(1/|J|) Σ_j r(i,j)²`, in `rows` order.
pub(crate) fn row_residue_scores(host: &DataMatrix, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    let m = means(host, rows, cols);
    let nc = cols.len() as f64;
    rows.iter()
        .enumerate()
        .map(|(a, &i)| {
            let r = host.row(i);
            cols.iter()
                .enumerate()
                .map(|(b, &j)| {
                    let res = r[j] - m.cols[b] - m.rows[a] + m.all;
                    res * res
                })
                .sum::<f64>()
                / nc
        })
        .collect()
}
