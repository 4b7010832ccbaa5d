//! Tabular data: loading, validation, min-max scaling and class splitting.
//!
//! Labels are stored as class roles in {-1, +1}. The role +1 ("class 1") is
//! the minority class of the training data, the one that gets biclustered;
//! [`LabelMap`] remembers the original label text for each role.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Role of the biclustered (minority) class.
pub const CLASS1: i8 = 1;
/// Role of the other class.
pub const CLASS2: i8 = -1;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("file not found: {0}")]
    MissingFile(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse value at row {row}, column {col}: {value:?}")]
    ParseError { row: usize, col: usize, value: String },
    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("label column must hold exactly two distinct values, found {0}")]
    NotBinary(usize),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("duplicate {axis} identifier {id:?}")]
    DuplicateId { axis: &'static str, id: String },
    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRow { row: usize, found: usize, expected: usize },
    #[error("labels must be -1 or +1, found {0}")]
    InvalidLabel(i64),
    #[error("a class is empty")]
    EmptyClass,
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Dense row-major matrix of finite reals with row and column identifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataMatrix {
    values: Vec<f64>,
    n_rows: usize,
    n_cols: usize,
    row_ids: Vec<String>,
    col_ids: Vec<String>,
}

impl DataMatrix {
    pub fn new(
        values: Vec<f64>,
        n_rows: usize,
        n_cols: usize,
        row_ids: Vec<String>,
        col_ids: Vec<String>,
    ) -> Result<Self, DatasetError> {
        if n_rows == 0 || n_cols == 0 {
            return Err(DatasetError::EmptyMatrix);
        }
        if values.len() != n_rows * n_cols {
            return Err(DatasetError::DimensionMismatch {
                expected: n_rows * n_cols,
                found: values.len(),
            });
        }
        if row_ids.len() != n_rows {
            return Err(DatasetError::DimensionMismatch {
                expected: n_rows,
                found: row_ids.len(),
            });
        }
        if col_ids.len() != n_cols {
            return Err(DatasetError::DimensionMismatch {
                expected: n_cols,
                found: col_ids.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(DatasetError::NonFiniteValue {
                row: pos / n_cols,
                col: pos % n_cols,
            });
        }
        check_unique("row", &row_ids)?;
        check_unique("column", &col_ids)?;
        Ok(DataMatrix {
            values,
            n_rows,
            n_cols,
            row_ids,
            col_ids,
        })
    }

    /// Builds a matrix from nested rows with generated ids (`r0..`, `c0..`).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, DatasetError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(DatasetError::RaggedRow {
                    row: i,
                    found: row.len(),
                    expected: n_cols,
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(
            values,
            n_rows,
            n_cols,
            (0..n_rows).map(|i| format!("r{i}")).collect(),
            (0..n_cols).map(|j| format!("c{j}")).collect(),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.get(i, col)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[String] {
        &self.col_ids
    }

    /// Row `row` restricted to `cols`, in the order given.
    pub fn project_row(&self, row: usize, cols: &[usize]) -> Vec<f64> {
        let r = self.row(row);
        cols.iter().map(|&j| r[j]).collect()
    }

    /// New matrix holding `rows` (in the order given) and all columns.
    pub fn select_rows(&self, rows: &[usize]) -> DataMatrix {
        let mut values = Vec::with_capacity(rows.len() * self.n_cols);
        for &i in rows {
            values.extend_from_slice(self.row(i));
        }
        DataMatrix {
            values,
            n_rows: rows.len(),
            n_cols: self.n_cols,
            row_ids: rows.iter().map(|&i| self.row_ids[i].clone()).collect(),
            col_ids: self.col_ids.clone(),
        }
    }
}

fn check_unique(axis: &'static str, ids: &[String]) -> Result<(), DatasetError> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(DatasetError::DuplicateId {
                axis,
                id: id.clone(),
            });
        }
    }
    Ok(())
}

/// Original label text for each class role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub class1: String,
    pub class2: String,
}

impl LabelMap {
    pub fn name(&self, role: i8) -> &str {
        if role == CLASS1 {
            &self.class1
        } else {
            &self.class2
        }
    }

    pub fn role(&self, name: &str) -> Option<i8> {
        if name == self.class1 {
            Some(CLASS1)
        } else if name == self.class2 {
            Some(CLASS2)
        } else {
            None
        }
    }
}

impl Default for LabelMap {
    fn default() -> Self {
        LabelMap {
            class1: "+1".to_string(),
            class2: "-1".to_string(),
        }
    }
}

/// Matrix plus per-row class roles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub matrix: DataMatrix,
    labels: Vec<i8>,
    pub label_map: LabelMap,
}

impl LabeledDataset {
    pub fn new(
        matrix: DataMatrix,
        labels: Vec<i8>,
        label_map: LabelMap,
    ) -> Result<Self, DatasetError> {
        if labels.len() != matrix.n_rows() {
            return Err(DatasetError::DimensionMismatch {
                expected: matrix.n_rows(),
                found: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l != CLASS1 && l != CLASS2) {
            return Err(DatasetError::InvalidLabel(bad as i64));
        }
        Ok(LabeledDataset {
            matrix,
            labels,
            label_map,
        })
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let c1 = self.labels.iter().filter(|&&l| l == CLASS1).count();
        (c1, self.labels.len() - c1)
    }

    pub fn select_rows(&self, rows: &[usize]) -> LabeledDataset {
        LabeledDataset {
            matrix: self.matrix.select_rows(rows),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            label_map: self.label_map.clone(),
        }
    }

    pub fn with_matrix(&self, matrix: DataMatrix) -> Result<LabeledDataset, DatasetError> {
        LabeledDataset::new(matrix, self.labels.clone(), self.label_map.clone())
    }

    /// Role of the more frequent class; class 2 wins ties.
    pub fn majority_role(&self) -> i8 {
        let (c1, c2) = self.class_counts();
        if c1 > c2 {
            CLASS1
        } else {
            CLASS2
        }
    }
}

/// Chooses the label playing the class-1 role: the less frequent one, or the
/// lexicographically smaller text on a tie.
pub fn assign_roles(labels: &[String]) -> Result<LabelMap, DatasetError> {
    let mut distinct: Vec<&str> = labels.iter().map(String::as_str).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != 2 {
        return Err(DatasetError::NotBinary(distinct.len()));
    }
    let (a, b) = (distinct[0], distinct[1]);
    let count_a = labels.iter().filter(|l| l.as_str() == a).count();
    let count_b = labels.len() - count_a;
    let (class1, class2) = if count_b < count_a { (b, a) } else { (a, b) };
    Ok(LabelMap {
        class1: class1.to_string(),
        class2: class2.to_string(),
    })
}

/// Where the label and optional row-id columns live in a CSV file.
#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    /// Label column name; the last column when `None`.
    pub label_column: Option<String>,
    /// Column holding row identifiers; rows are numbered from 1 when `None`.
    pub id_column: Option<String>,
}

impl CsvOptions {
    pub fn with_label(label_column: Option<&str>) -> Self {
        CsvOptions {
            label_column: label_column.map(str::to_string),
            id_column: None,
        }
    }
}

struct RawTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table(path: &Path) -> Result<RawTable, DatasetError> {
    if !path.exists() {
        return Err(DatasetError::MissingFile(path.display().to_string()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(DatasetError::RaggedRow {
                row: i,
                found: record.len(),
                expected: header.len(),
            });
        }
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(RawTable { header, rows })
}

fn column_index(header: &[String], name: &str) -> Result<usize, DatasetError> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| DatasetError::UnknownColumn(name.to_string()))
}

fn parse_cell(text: &str, row: usize, col: usize) -> Result<f64, DatasetError> {
    let v: f64 = text.parse().map_err(|_| DatasetError::ParseError {
        row,
        col,
        value: text.to_string(),
    })?;
    if !v.is_finite() {
        return Err(DatasetError::NonFiniteValue { row, col });
    }
    Ok(v)
}

fn feature_matrix(
    table: &RawTable,
    skip: &[usize],
    id_col: Option<usize>,
) -> Result<DataMatrix, DatasetError> {
    let feature_cols: Vec<usize> = (0..table.header.len())
        .filter(|c| !skip.contains(c))
        .collect();
    let mut values = Vec::with_capacity(table.rows.len() * feature_cols.len());
    for (i, row) in table.rows.iter().enumerate() {
        for &c in &feature_cols {
            values.push(parse_cell(&row[c], i, c)?);
        }
    }
    let row_ids = match id_col {
        Some(c) => table.rows.iter().map(|r| r[c].clone()).collect(),
        None => (1..=table.rows.len()).map(|i| i.to_string()).collect(),
    };
    let col_ids = feature_cols.iter().map(|&c| table.header[c].clone()).collect();
    DataMatrix::new(values, table.rows.len(), feature_cols.len(), row_ids, col_ids)
}

/// Loads a labeled CSV; the minority label takes the class-1 role.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: Option<&str>,
) -> Result<LabeledDataset, DatasetError> {
    load_csv_with(path, &CsvOptions::with_label(label_column))
}

pub fn load_csv_with(
    path: impl AsRef<Path>,
    options: &CsvOptions,
) -> Result<LabeledDataset, DatasetError> {
    let table = read_table(path.as_ref())?;
    if table.header.is_empty() {
        return Err(DatasetError::EmptyMatrix);
    }
    let label_col = match &options.label_column {
        Some(name) => column_index(&table.header, name)?,
        None => table.header.len() - 1,
    };
    let id_col = options
        .id_column
        .as_deref()
        .map(|name| column_index(&table.header, name))
        .transpose()?;
    let raw_labels: Vec<String> = table.rows.iter().map(|r| r[label_col].clone()).collect();
    let label_map = assign_roles(&raw_labels)?;
    let mut skip = vec![label_col];
    skip.extend(id_col);
    let matrix = feature_matrix(&table, &skip, id_col)?;
    let labels = raw_labels
        .iter()
        .map(|l| label_map.role(l).unwrap_or(CLASS2))
        .collect();
    LabeledDataset::new(matrix, labels, label_map)
}

/// Loads feature rows for prediction, dropping `drop_columns` (typically the
/// label column) when present. Returns the matrix and the original text of the
/// first dropped column found, if any.
pub fn load_features_csv(
    path: impl AsRef<Path>,
    id_column: Option<&str>,
    drop_columns: &[&str],
) -> Result<(DataMatrix, Option<Vec<String>>), DatasetError> {
    let table = read_table(path.as_ref())?;
    let id_col = id_column
        .map(|name| column_index(&table.header, name))
        .transpose()?;
    let dropped: Vec<usize> = drop_columns
        .iter()
        .filter_map(|name| table.header.iter().position(|h| h == name))
        .collect();
    let extra = dropped
        .first()
        .map(|&c| table.rows.iter().map(|r| r[c].clone()).collect());
    let mut skip = dropped;
    skip.extend(id_col);
    Ok((feature_matrix(&table, &skip, id_col)?, extra))
}

/// Per-column min-max parameters captured from training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl Normalizer {
    pub fn fit(d: &DataMatrix) -> Self {
        let mut mins = vec![f64::INFINITY; d.n_cols()];
        let mut maxs = vec![f64::NEG_INFINITY; d.n_cols()];
        for i in 0..d.n_rows() {
            for (j, &v) in d.row(i).iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Normalizer { mins, maxs }
    }

    pub fn n_cols(&self) -> usize {
        self.mins.len()
    }

    /// Scales one value of column `col`; zero-range columns map to 0.
    /// Values outside the training range are not clamped.
    #[inline]
    pub fn scale(&self, col: usize, v: f64) -> f64 {
        let range = self.maxs[col] - self.mins[col];
        if range > 0.0 {
            (v - self.mins[col]) / range
        } else {
            0.0
        }
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>, DatasetError> {
        if row.len() != self.n_cols() {
            return Err(DatasetError::DimensionMismatch {
                expected: self.n_cols(),
                found: row.len(),
            });
        }
        Ok(row.iter().enumerate().map(|(j, &v)| self.scale(j, v)).collect())
    }

    pub fn transform(&self, d: &DataMatrix) -> Result<DataMatrix, DatasetError> {
        if d.n_cols() != self.n_cols() {
            return Err(DatasetError::DimensionMismatch {
                expected: self.n_cols(),
                found: d.n_cols(),
            });
        }
        let n_cols = d.n_cols();
        let values = d
            .values()
            .iter()
            .enumerate()
            .map(|(k, &v)| self.scale(k % n_cols, v))
            .collect();
        Ok(DataMatrix {
            values,
            n_rows: d.n_rows(),
            n_cols,
            row_ids: d.row_ids.clone(),
            col_ids: d.col_ids.clone(),
        })
    }
}

/// Min-max scales every column of `d` to [0, 1] and returns the parameters
/// used, so held-out rows can be mapped the same way.
pub fn min_max_normalize(d: &DataMatrix) -> (DataMatrix, Normalizer) {
    let norm = Normalizer::fit(d);
    let scaled = norm
        .transform(d)
        .expect("normalizer fitted on the same matrix");
    (scaled, norm)
}

/// The two class sub-matrices, with maps back to parent row indices.
#[derive(Debug, Clone)]
pub struct ClassSplit {
    pub class1: DataMatrix,
    pub class2: DataMatrix,
    pub class1_rows: Vec<usize>,
    pub class2_rows: Vec<usize>,
}

pub fn split_by_class(d: &LabeledDataset) -> Result<ClassSplit, DatasetError> {
    let (class1_rows, class2_rows): (Vec<usize>, Vec<usize>) =
        (0..d.n_rows()).partition(|&i| d.labels()[i] == CLASS1);
    if class1_rows.is_empty() || class2_rows.is_empty() {
        return Err(DatasetError::EmptyClass);
    }
    Ok(ClassSplit {
        class1: d.matrix.select_rows(&class1_rows),
        class2: d.matrix.select_rows(&class2_rows),
        class1_rows,
        class2_rows,
    })
}
