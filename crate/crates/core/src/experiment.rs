//! Cross-validated comparison of perceptron baselines and bicluster-based
//! models, with per-fold rows, aggregates and pairwise Wilcoxon tests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{load_csv_with, CsvOptions, DatasetError, LabeledDataset, Normalizer, CLASS1};
use crate::evaluation::{
    derive_seed, grid_calibrate, metrics, stratified_folds, wilcoxon_exact, EvalError, GridSpec,
    MetricReport, SIGNIFICANCE_LEVEL,
};
use crate::perceptron::{
    Kernel, LearnerKind, DEFAULT_EPOCHS, DEFAULT_LEARNING_RATE, DEFAULT_SIGMA,
};
use crate::pipeline::{fit, PipelineError};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    Sp,
    KpLinear,
    KpRbf,
    Bn,
    BnLinear,
    BnRbf,
    /// Always predicts the training-set majority class.
    Majority,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Sp,
        ModelKind::KpLinear,
        ModelKind::KpRbf,
        ModelKind::Bn,
        ModelKind::BnLinear,
        ModelKind::BnRbf,
        ModelKind::Majority,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Sp => "sp",
            ModelKind::KpLinear => "kp-linear",
            ModelKind::KpRbf => "kp-rbf",
            ModelKind::Bn => "bn",
            ModelKind::BnLinear => "bn-linear",
            ModelKind::BnRbf => "bn-rbf",
            ModelKind::Majority => "majority",
        }
    }

    pub fn is_bicluster_model(self) -> bool {
        matches!(self, ModelKind::Bn | ModelKind::BnLinear | ModelKind::BnRbf)
    }

    fn code(self) -> u64 {
        self as u64
    }

    /// Perceptron used by this model (on the full space for baselines, on
    /// the selected subspace for bicluster models).
    pub fn learner(self, params: &LearnerParams, seed: u64) -> Option<LearnerKind> {
        match self {
            ModelKind::Sp | ModelKind::Bn => Some(LearnerKind::Standard {
                learning_rate: params.learning_rate,
                epochs: params.epochs,
                seed,
            }),
            ModelKind::KpLinear | ModelKind::BnLinear => Some(LearnerKind::Kernel {
                kernel: Kernel::Linear,
                epochs: params.epochs,
            }),
            ModelKind::KpRbf | ModelKind::BnRbf => Some(LearnerKind::Kernel {
                kernel: Kernel::Rbf {
                    sigma: params.sigma,
                },
                epochs: params.epochs,
            }),
            ModelKind::Majority => None,
        }
    }
}

impl FromStr for ModelKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| ExperimentError::Usage(format!("unknown model {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerParams {
    pub epochs: usize,
    pub learning_rate: f64,
    pub sigma: f64,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            epochs: DEFAULT_EPOCHS,
            learning_rate: DEFAULT_LEARNING_RATE,
            sigma: DEFAULT_SIGMA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Table,
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(ExperimentError::Usage(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub data: Vec<PathBuf>,
    pub label_col: Option<String>,
    pub id_col: Option<String>,
    pub k: usize,
    pub inner_k: usize,
    pub seed: u64,
    pub grid: GridSpec,
    pub models: Vec<ModelKind>,
    pub learner: LearnerParams,
    pub alpha: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data: Vec::new(),
            label_col: None,
            id_col: None,
            k: 10,
            inner_k: 3,
            seed: 0,
            grid: GridSpec::default(),
            models: vec![ModelKind::Sp, ModelKind::KpLinear, ModelKind::Bn],
            learner: LearnerParams::default(),
            alpha: SIGNIFICANCE_LEVEL,
            out: None,
            format: OutputFormat::Table,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.k < 2 {
            return Err(ExperimentError::Usage(format!("k must be >= 2, got {}", self.k)));
        }
        if self.inner_k < 2 {
            return Err(ExperimentError::Usage(format!(
                "inner k must be >= 2, got {}",
                self.inner_k
            )));
        }
        if self.models.is_empty() {
            return Err(ExperimentError::Usage("model roster is empty".into()));
        }
        if self.models.iter().any(|m| m.is_bicluster_model())
            && (self.grid.t_d.is_empty() || self.grid.tau.is_empty())
        {
            return Err(ExperimentError::Usage("t_d and tau grids must be non-empty".into()));
        }
        Ok(())
    }
}

/// Test-fold outcome of one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub dataset: String,
    pub model: String,
    pub fold: usize,
    pub acc: f64,
    pub acc_minor: f64,
    pub acc_major: f64,
    pub auc: f64,
    /// Bicluster model fell back to majority prediction on this fold.
    pub fallback: bool,
    pub t_d: Option<f64>,
    pub tau: Option<f64>,
}

impl FoldResult {
    fn new(dataset: &str, model: ModelKind, fold: usize, r: &MetricReport) -> Self {
        FoldResult {
            dataset: dataset.to_string(),
            model: model.name().to_string(),
            fold,
            acc: r.acc,
            acc_minor: r.acc_minor,
            acc_major: r.acc_major,
            auc: r.auc,
            fallback: false,
            t_d: None,
            tau: None,
        }
    }

    pub fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::Acc => self.acc,
            Metric::AccMinor => self.acc_minor,
            Metric::AccMajor => self.acc_major,
            Metric::Auc => self.auc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Acc,
    AccMinor,
    AccMajor,
    Auc,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Acc, Metric::AccMinor, Metric::AccMajor, Metric::Auc];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Acc => "acc",
            Metric::AccMinor => "acc_minor",
            Metric::AccMajor => "acc_major",
            Metric::Auc => "auc",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Metric::Acc => "ACC",
            Metric::AccMinor => "ACCm",
            Metric::AccMajor => "ACCM",
            Metric::Auc => "AUC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
    pub best: f64,
}

impl Aggregate {
    /// Mean, sample standard deviation and maximum.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Aggregate { mean, std, best }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub dataset: String,
    pub model: String,
    pub folds: usize,
    pub fallback_folds: usize,
    pub acc: Aggregate,
    pub acc_minor: Aggregate,
    pub acc_major: Aggregate,
    pub auc: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub dataset: String,
    pub metric: Metric,
    pub model_a: String,
    pub model_b: String,
    pub mean_a: f64,
    pub mean_b: f64,
    pub p_value: f64,
    pub significant: bool,
}

impl Comparison {
    /// The significantly better model, if any.
    pub fn winner(&self) -> Option<&str> {
        if !self.significant || self.mean_a == self.mean_b {
            return None;
        }
        Some(if self.mean_a > self.mean_b {
            &self.model_a
        } else {
            &self.model_b
        })
    }
}

fn majority_report(train: &LabeledDataset, test: &LabeledDataset) -> MetricReport {
    let role = train.majority_role();
    let preds = vec![role; test.n_rows()];
    metrics(test.labels(), &preds, CLASS1).expect("test fold is non-empty")
}

/// Trains `model` on `train` and scores it on `test`.
pub fn run_fold(
    dataset: &str,
    model: ModelKind,
    fold: usize,
    train: &LabeledDataset,
    test: &LabeledDataset,
    cfg: &ExperimentConfig,
) -> Result<FoldResult, ExperimentError> {
    let unit_seed = derive_seed(cfg.seed, &[fold as u64, model.code()]);
    let learner = model.learner(&cfg.learner, unit_seed);
    match (model, learner) {
        (ModelKind::Majority, _) | (_, None) => Ok(FoldResult::new(
            dataset,
            model,
            fold,
            &majority_report(train, test),
        )),
        (m, Some(learner)) if !m.is_bicluster_model() => {
            let norm = Normalizer::fit(&train.matrix);
            let train_n = train.with_matrix(norm.transform(&train.matrix)?)?;
            let test_n = norm.transform(&test.matrix)?;
            let p = learner.train(&train_n).map_err(PipelineError::from)?;
            let preds = (0..test_n.n_rows())
                .map(|i| p.predict(test_n.row(i)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(PipelineError::from)?;
            let r = metrics(test.labels(), &preds, CLASS1)?;
            Ok(FoldResult::new(dataset, model, fold, &r))
        }
        (m, Some(learner)) => {
            let fitted = grid_calibrate(train, &cfg.grid, cfg.inner_k, unit_seed, &learner)
                .map_err(ExperimentError::from)
                .and_then(|cal| {
                    let bn = cal.config(cfg.grid.t_m, learner);
                    Ok((cal, fit(train, &bn)?))
                });
            match fitted {
                Ok((cal, model_fit)) => {
                    let preds = (0..test.n_rows())
                        .map(|i| model_fit.predict_role(test.matrix.row(i)))
                        .collect::<Result<Vec<_>, _>>()?;
                    let r = metrics(test.labels(), &preds, CLASS1)?;
                    let mut row = FoldResult::new(dataset, m, fold, &r);
                    row.t_d = Some(cal.t_d);
                    row.tau = Some(cal.tau);
                    Ok(row)
                }
                Err(ExperimentError::Eval(EvalError::AllConfigurationsFailed))
                | Err(ExperimentError::Eval(EvalError::ClassSmallerThanK { .. }))
                | Err(ExperimentError::Pipeline(PipelineError::NoDiscriminativeSubspace))
                | Err(ExperimentError::Pipeline(PipelineError::NoCoherentBiclusters))
                | Err(ExperimentError::Pipeline(PipelineError::Bicluster(_))) => {
                    let mut row = FoldResult::new(dataset, m, fold, &majority_report(train, test));
                    row.fallback = true;
                    Ok(row)
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// Outer stratified k-fold cross-validation of every model in the roster.
/// Results are ordered by model (roster order) then fold, independent of how
/// many threads run the folds.
pub fn evaluate_dataset(
    dataset: &str,
    data: &LabeledDataset,
    cfg: &ExperimentConfig,
) -> Result<Vec<FoldResult>, ExperimentError> {
    cfg.validate()?;
    let plan = stratified_folds(data.labels(), cfg.k, cfg.seed)?;
    let jobs: Vec<(ModelKind, usize)> = cfg
        .models
        .iter()
        .flat_map(|&m| (0..cfg.k).map(move |f| (m, f)))
        .collect();
    jobs.par_iter()
        .map(|&(model, fold)| {
            let train = data.select_rows(&plan.train_indices(fold));
            let test = data.select_rows(&plan.test_indices(fold));
            run_fold(dataset, model, fold, &train, &test, cfg)
        })
        .collect()
}

pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Loads every configured dataset and evaluates the roster on each.
pub fn evaluate(cfg: &ExperimentConfig) -> Result<Vec<FoldResult>, ExperimentError> {
    cfg.validate()?;
    if cfg.data.is_empty() {
        return Err(ExperimentError::Usage("no dataset given".into()));
    }
    let options = CsvOptions {
        label_column: cfg.label_col.clone(),
        id_column: cfg.id_col.clone(),
    };
    let loaded = cfg
        .data
        .iter()
        .map(|p| Ok((dataset_name(p), load_csv_with(p, &options)?)))
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    // fail early on folds that cannot be built
    for (_, d) in &loaded {
        stratified_folds(d.labels(), cfg.k, cfg.seed)?;
    }
    let mut rows = Vec::new();
    for (name, d) in &loaded {
        rows.extend(evaluate_dataset(name, d, cfg)?);
    }
    Ok(rows)
}

fn group_keys(rows: &[FoldResult]) -> Vec<(String, String)> {
    let mut keys: Vec<(String, String)> = Vec::new();
    for r in rows {
        let key = (r.dataset.clone(), r.model.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys
}

fn values_of(rows: &[FoldResult], dataset: &str, model: &str, metric: Metric) -> Vec<f64> {
    let mut sel: Vec<&FoldResult> = rows
        .iter()
        .filter(|r| r.dataset == dataset && r.model == model)
        .collect();
    sel.sort_by_key(|r| r.fold);
    sel.iter().map(|r| r.metric(metric)).collect()
}

pub fn summarize(rows: &[FoldResult]) -> Vec<ModelSummary> {
    group_keys(rows)
        .into_iter()
        .map(|(dataset, model)| {
            let agg = |m| Aggregate::of(&values_of(rows, &dataset, &model, m));
            let sel = rows.iter().filter(|r| r.dataset == dataset && r.model == model);
            ModelSummary {
                folds: sel.clone().count(),
                fallback_folds: sel.filter(|r| r.fallback).count(),
                acc: agg(Metric::Acc),
                acc_minor: agg(Metric::AccMinor),
                acc_major: agg(Metric::AccMajor),
                auc: agg(Metric::Auc),
                dataset,
                model,
            }
        })
        .collect()
}

/// Pairwise exact Wilcoxon tests over paired per-fold ACC and AUC values.
pub fn compare(rows: &[FoldResult], alpha: f64) -> Result<Vec<Comparison>, ExperimentError> {
    let keys = group_keys(rows);
    let mut datasets: Vec<&str> = Vec::new();
    for (d, _) in &keys {
        if !datasets.contains(&d.as_str()) {
            datasets.push(d);
        }
    }
    let mut out = Vec::new();
    for dataset in datasets {
        let models: Vec<&str> = keys
            .iter()
            .filter(|(d, _)| d == dataset)
            .map(|(_, m)| m.as_str())
            .collect();
        if models.len() < 2 {
            return Err(ExperimentError::Usage(
                "comparison needs at least two models".into(),
            ));
        }
        for metric in [Metric::Acc, Metric::Auc] {
            for a in 0..models.len() {
                for b in a + 1..models.len() {
                    let va = values_of(rows, dataset, models[a], metric);
                    let vb = values_of(rows, dataset, models[b], metric);
                    let p = wilcoxon_exact(&va, &vb)?;
                    out.push(Comparison {
                        dataset: dataset.to_string(),
                        metric,
                        model_a: models[a].to_string(),
                        model_b: models[b].to_string(),
                        mean_a: Aggregate::of(&va).mean,
                        mean_b: Aggregate::of(&vb).mean,
                        p_value: p,
                        significant: p <= alpha,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

pub fn folds_csv(rows: &[FoldResult]) -> String {
    let mut s = String::from("dataset,model,fold,acc,acc_minor,acc_major,auc,fallback,t_d,tau\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{},{},{}",
            r.dataset,
            r.model,
            r.fold + 1,
            r.acc,
            r.acc_minor,
            r.acc_major,
            r.auc,
            r.fallback,
            opt(r.t_d),
            opt(r.tau)
        );
    }
    s
}

/// Reads per-fold rows written by [`folds_csv`].
pub fn read_folds_csv(path: &Path) -> Result<Vec<FoldResult>, ExperimentError> {
    if !path.exists() {
        return Err(DatasetError::MissingFile(path.display().to_string()).into());
    }
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64, ExperimentError> {
            rec.get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| ExperimentError::Usage(format!("bad value in results file: {rec:?}")))
        };
        let opt_num = |i: usize| rec.get(i).and_then(|v| v.parse().ok());
        rows.push(FoldResult {
            dataset: rec.get(0).unwrap_or_default().to_string(),
            model: rec.get(1).unwrap_or_default().to_string(),
            fold: num(2)? as usize - 1,
            acc: num(3)?,
            acc_minor: num(4)?,
            acc_major: num(5)?,
            auc: num(6)?,
            fallback: rec.get(7) == Some("true"),
            t_d: opt_num(8),
            tau: opt_num(9),
        });
    }
    Ok(rows)
}

pub fn summary_csv(summaries: &[ModelSummary]) -> String {
    let mut s = String::from("dataset,model,metric,mean,std,best,folds,fallback_folds\n");
    for m in summaries {
        for (metric, agg) in [
            (Metric::Acc, m.acc),
            (Metric::AccMinor, m.acc_minor),
            (Metric::AccMajor, m.acc_major),
            (Metric::Auc, m.auc),
        ] {
            let _ = writeln!(
                s,
                "{},{},{},{:.6},{:.6},{:.6},{},{}",
                m.dataset,
                m.model,
                metric.name(),
                agg.mean,
                agg.std,
                agg.best,
                m.folds,
                m.fallback_folds
            );
        }
    }
    s
}

pub fn comparisons_csv(comps: &[Comparison]) -> String {
    let mut s = String::from("dataset,metric,model_a,model_b,mean_a,mean_b,p_value,significant,winner\n");
    for c in comps {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.6},{:.6},{:.6},{},{}",
            c.dataset,
            c.metric.name(),
            c.model_a,
            c.model_b,
            c.mean_a,
            c.mean_b,
            c.p_value,
            c.significant,
            c.winner().unwrap_or("")
        );
    }
    s
}

/// One JSON object per line: fold rows, then summaries, then comparisons.
pub fn records_jsonl(rows: &[FoldResult], summaries: &[ModelSummary], comps: &[Comparison]) -> String {
    #[derive(Serialize)]
    #[serde(tag = "record", rename_all = "snake_case")]
    enum Record<'a> {
        Fold(&'a FoldResult),
        Summary(&'a ModelSummary),
        Comparison(&'a Comparison),
    }
    let mut s = String::new();
    let records = rows
        .iter()
        .map(Record::Fold)
        .chain(summaries.iter().map(Record::Summary))
        .chain(comps.iter().map(Record::Comparison));
    for rec in records {
        s.push_str(&serde_json::to_string(&rec).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Human-readable per-fold tables, one per metric and dataset, with
/// mean ± std and best rows. Folds where a bicluster model fell back to the
/// majority class carry a `*`.
pub fn render_tables(rows: &[FoldResult], summaries: &[ModelSummary]) -> String {
    let mut s = String::new();
    let keys = group_keys(rows);
    let mut datasets: Vec<&str> = Vec::new();
    for (d, _) in &keys {
        if !datasets.contains(&d.as_str()) {
            datasets.push(d);
        }
    }
    for dataset in datasets {
        let models: Vec<&str> = keys
            .iter()
            .filter(|(d, _)| d == dataset)
            .map(|(_, m)| m.as_str())
            .collect();
        let k = rows
            .iter()
            .filter(|r| r.dataset == dataset)
            .map(|r| r.fold + 1)
            .max()
            .unwrap_or(0);
        for metric in Metric::ALL {
            let _ = writeln!(s, "{}: {}", dataset, metric.title());
            let _ = write!(s, "{:>6}", "fold");
            for m in &models {
                let _ = write!(s, " {:>13}", m);
            }
            s.push('\n');
            for f in 0..k {
                let _ = write!(s, "{:>6}", f + 1);
                for m in &models {
                    let cell = rows
                        .iter()
                        .find(|r| r.dataset == dataset && r.model == *m && r.fold == f)
                        .map(|r| format!("{:.2}{}", r.metric(metric), if r.fallback { "*" } else { "" }))
                        .unwrap_or_else(|| "-".to_string());
                    let _ = write!(s, " {:>13}", cell);
                }
                s.push('\n');
            }
            for (label, pick) in [("mean", 0), ("best", 1)] {
                let _ = write!(s, "{:>6}", label);
                for m in &models {
                    let sum = summaries
                        .iter()
                        .find(|x| x.dataset == dataset && x.model == *m)
                        .expect("summary per model");
                    let agg = match metric {
                        Metric::Acc => sum.acc,
                        Metric::AccMinor => sum.acc_minor,
                        Metric::AccMajor => sum.acc_major,
                        Metric::Auc => sum.auc,
                    };
                    let cell = if pick == 0 {
                        format!("{:.2} ± {:.2}", agg.mean, agg.std)
                    } else {
                        format!("{:.2}", agg.best)
                    };
                    let _ = write!(s, " {:>13}", cell);
                }
                s.push('\n');
            }
            s.push('\n');
        }
    }
    s
}

pub fn render_comparisons(comps: &[Comparison], alpha: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "pairwise Wilcoxon signed-rank (exact, two-sided), significance at p <= {alpha}");
    for c in comps {
        let mark = match c.winner() {
            Some(w) => format!("  {w} better"),
            None => String::new(),
        };
        let _ = writeln!(
            s,
            "{:<12} {:<4} {:>10} vs {:<10} {:.2} vs {:.2}  p=({:.2}){}",
            c.dataset,
            c.metric.title(),
            c.model_a,
            c.model_b,
            c.mean_a,
            c.mean_b,
            c.p_value,
            mark
        );
    }
    s
}

/// Writes `folds.csv`, `summary.csv`, `comparisons.csv` and `results.jsonl`
/// into `dir`.
pub fn write_outputs(
    dir: &Path,
    rows: &[FoldResult],
    summaries: &[ModelSummary],
    comps: &[Comparison],
) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("folds.csv"), folds_csv(rows))?;
    std::fs::write(dir.join("summary.csv"), summary_csv(summaries))?;
    std::fs::write(dir.join("comparisons.csv"), comparisons_csv(comps))?;
    std::fs::write(dir.join("results.jsonl"), records_jsonl(rows, summaries, comps))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(model: &str, fold: usize, v: f64) -> FoldResult {
        FoldResult {
            dataset: "d".into(),
            model: model.into(),
            fold,
            acc: v,
            acc_minor: v,
            acc_major: v,
            auc: v,
            fallback: false,
            t_d: None,
            tau: None,
        }
    }

    #[test]
    fn identical_models_not_significant() {
        let rows: Vec<FoldResult> = (0..10)
            .flat_map(|f| [row("a", f, 0.1 * f as f64), row("b", f, 0.1 * f as f64)])
            .collect();
        let comps = compare(&rows, 0.01).unwrap();
        assert_eq!(comps.len(), 2);
        for c in comps {
            assert_eq!(c.p_value, 1.0);
            assert!(!c.significant);
            assert_eq!(c.winner(), None);
        }
    }

    #[test]
    fn single_model_comparison_is_usage_error() {
        let rows = vec![row("a", 0, 1.0)];
        assert!(matches!(compare(&rows, 0.01), Err(ExperimentError::Usage(_))));
    }

    #[test]
    fn aggregate_values() {
        let a = Aggregate::of(&[1.0, 1.0, 1.0]);
        assert_eq!((a.mean, a.std, a.best), (1.0, 0.0, 1.0));
    }

    #[test]
    fn folds_csv_round_trip() {
        let rows = vec![row("a", 0, 0.25), row("b", 1, 0.5)];
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("folds.csv");
        std::fs::write(&p, folds_csv(&rows)).unwrap();
        assert_eq!(read_folds_csv(&p).unwrap(), rows);
    }

    #[test]
    fn model_names_parse() {
        for m in ModelKind::ALL {
            assert_eq!(m.name().parse::<ModelKind>().unwrap(), m);
        }
        assert!("svm".parse::<ModelKind>().is_err());
    }
}
