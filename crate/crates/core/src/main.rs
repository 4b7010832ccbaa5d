use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bicneuron::bicluster::{Bicluster, BiclusteringParams};
use bicneuron::config::{splice_config, ConfigError};
use bicneuron::contrastive::filter_pairs;
use bicneuron::dataset::{
    load_csv_with, load_features_csv, min_max_normalize, split_by_class, CsvOptions, DatasetError,
    LabeledDataset,
};
use bicneuron::evaluation::{grid_calibrate, EvalError, GridSpec};
use bicneuron::experiment::{
    compare, comparisons_csv, dataset_name, evaluate, folds_csv, read_folds_csv, records_jsonl,
    render_comparisons, render_tables, summarize, summary_csv, write_outputs, ExperimentConfig,
    ExperimentError, LearnerParams, ModelKind, OutputFormat,
};
use bicneuron::pipeline::{fit, prepare, BicNeuronModel, PipelineError};
use bicneuron::synthetic::{planted_subspace, uniform_noise, write_csv, PlantedSpec};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_RUNTIME: u8 = 4;

#[derive(Parser)]
#[command(
    name = "bicneuron",
    version,
    about = "Perceptrons on contrastive bicluster subspaces",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine biclusters and contrastive pairs, dump them with a summary
    Bicluster {
        #[command(flatten)]
        opts: Opts,
        /// Use these class-1 biclusters (dump format) instead of mining
        #[arg(long)]
        biclusters: Option<PathBuf>,
    },
    /// Cross-validate every model in the roster
    Evaluate {
        #[command(flatten)]
        opts: Opts,
    },
    /// Pairwise Wilcoxon tests between models
    Compare {
        #[command(flatten)]
        opts: Opts,
        /// Per-fold results (folds.csv) from an earlier evaluate run
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Fit one model on a whole dataset
    Fit {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Predict labels with a saved model
    Predict {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        model: PathBuf,
    },
    /// Write a synthetic dataset
    Synth {
        /// planted or noise
        #[arg(long, default_value = "planted")]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Clone)]
struct Opts {
    /// Dataset CSV (comma-separated list for evaluate/compare)
    #[arg(long, value_delimiter = ',')]
    data: Vec<PathBuf>,
    /// Label column (default: last column)
    #[arg(long)]
    label_col: Option<String>,
    /// Row identifier column, excluded from the features
    #[arg(long)]
    id_col: Option<String>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Folds of the inner calibration split
    #[arg(long, default_value_t = 3)]
    inner_k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',')]
    td: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.02)]
    tm: f64,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    /// sp, kp-linear, kp-rbf, bn, bn-linear, bn-rbf, majority
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "table")]
    format: String,
}

enum CliError {
    Usage(String),
    Data(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::ClassSmallerThanK { .. } => CliError::Data(e.to_string()),
            EvalError::InvalidK(_) | EvalError::EmptyGrid => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Dataset(d) => d.into(),
            PipelineError::InvalidConfig(_) | PipelineError::Perceptron(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Usage(m) => CliError::Usage(m),
            ExperimentError::Dataset(d) => d.into(),
            ExperimentError::Eval(e) => e.into(),
            ExperimentError::Pipeline(p) => p.into(),
            ExperimentError::Csv(_) => CliError::Data(e.to_string()),
            ExperimentError::Io(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl Opts {
    fn csv_options(&self) -> CsvOptions {
        CsvOptions {
            label_column: self.label_col.clone(),
            id_column: self.id_col.clone(),
        }
    }

    fn single_data(&self) -> Result<&Path, CliError> {
        match self.data.as_slice() {
            [p] => Ok(p),
            [] => Err(CliError::Usage("--data is required".into())),
            _ => Err(CliError::Usage("this command takes a single --data file".into())),
        }
    }

    fn format(&self) -> Result<OutputFormat, CliError> {
        Ok(self.format.parse::<OutputFormat>()?)
    }

    fn learner_params(&self) -> LearnerParams {
        LearnerParams {
            epochs: self.epochs,
            learning_rate: self.lr,
            sigma: self.sigma,
        }
    }

    fn grid(&self) -> GridSpec {
        let default = GridSpec::default();
        GridSpec {
            t_d: self.td.clone().unwrap_or(default.t_d),
            tau: self.tau.clone().unwrap_or(default.tau),
            t_m: self.tm,
        }
    }

    fn roster(&self, default: &[ModelKind]) -> Result<Vec<ModelKind>, CliError> {
        match &self.models {
            None => Ok(default.to_vec()),
            Some(names) => names
                .iter()
                .map(|n| n.parse::<ModelKind>().map_err(CliError::from))
                .collect(),
        }
    }

    fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let defaults = ExperimentConfig::default();
        let cfg = ExperimentConfig {
            data: self.data.clone(),
            label_col: self.label_col.clone(),
            id_col: self.id_col.clone(),
            k: self.k,
            inner_k: self.inner_k,
            seed: self.seed,
            grid: self.grid(),
            models: self.roster(&defaults.models)?,
            learner: self.learner_params(),
            out: self.out.clone(),
            format: self.format()?,
            ..defaults
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn single(values: &Option<Vec<f64>>, default: f64, flag: &str) -> Result<f64, CliError> {
        match values.as_deref() {
            None => Ok(default),
            Some([v]) => Ok(*v),
            Some(_) => Err(CliError::Usage(format!("{flag} takes a single value here"))),
        }
    }
}

fn ratio_summary(ratios: &mut [f64]) -> String {
    if ratios.is_empty() {
        return "ratio=none".to_string();
    }
    ratios.sort_by(f64::total_cmp);
    let n = ratios.len();
    let median = if n % 2 == 1 {
        ratios[n / 2]
    } else {
        (ratios[n / 2 - 1] + ratios[n / 2]) / 2.0
    };
    format!(
        "ratio_min={:.6} ratio_median={:.6} ratio_max={:.6}",
        ratios[0],
        median,
        ratios[n - 1]
    )
}

fn cmd_bicluster(opts: &Opts, fixtures: Option<&Path>) -> Result<(), CliError> {
    let data = load_csv_with(opts.single_data()?, &opts.csv_options())?;
    let t_d = Opts::single(&opts.td, BiclusteringParams::default().t_d, "--td")?;
    let tau = Opts::single(&opts.tau, 0.9, "--tau")?;
    let params = BiclusteringParams::new(t_d, opts.tm);
    params.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let fixtures = match fixtures {
        Some(path) => Some(read_fixtures(&data, path)?),
        None => None,
    };
    let prepared = prepare(&data, &params, fixtures.as_deref())?;
    let split = &prepared.split;

    let mut dump = String::new();
    for p in &prepared.pairs {
        dump.push_str(&p.dump_line(&split.class1, &split.class2));
        dump.push('\n');
    }
    let kept = filter_pairs(&prepared.pairs, tau);
    let discarded = prepared.pairs.iter().filter(|p| p.ratio.value().is_none()).count();
    let mut ratios: Vec<f64> = prepared.pairs.iter().filter_map(|p| p.ratio.value()).collect();
    let summary = format!(
        "# biclusters={} pairs={} discarded={} kept={} tau={} t_d={} t_m={} {}\n",
        prepared.biclusters.len(),
        prepared.pairs.len(),
        discarded,
        kept.len(),
        tau,
        t_d,
        opts.tm,
        ratio_summary(&mut ratios)
    );

    match &opts.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("pairs.txt"), &dump)?;
            let mut b = String::new();
            for bc in &prepared.biclusters {
                b.push_str(&bc.dump_line(&split.class1));
                b.push('\n');
            }
            std::fs::write(dir.join("biclusters.txt"), b)?;
            print!("{summary}");
        }
        None => print!("{dump}{summary}"),
    }
    Ok(())
}

/// Reads fixture biclusters given over the normalized class-1 rows.
fn read_fixtures(data: &LabeledDataset, path: &Path) -> Result<Vec<Bicluster>, CliError> {
    if !path.exists() {
        return Err(DatasetError::MissingFile(path.display().to_string()).into());
    }
    let (matrix, _) = min_max_normalize(&data.matrix);
    let split = split_by_class(&data.with_matrix(matrix)?)?;
    std::fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Bicluster::parse_line(l, &split.class1).map_err(|e| CliError::Data(e.to_string())))
        .collect()
}

fn cmd_evaluate(opts: &Opts) -> Result<(), CliError> {
    let cfg = opts.experiment()?;
    let rows = evaluate(&cfg)?;
    let summaries = summarize(&rows);
    let comps = if cfg.models.len() > 1 {
        compare(&rows, cfg.alpha)?
    } else {
        Vec::new()
    };
    if let Some(dir) = &cfg.out {
        write_outputs(dir, &rows, &summaries, &comps)?;
    }
    match cfg.format {
        OutputFormat::Table => {
            print!("{}", render_tables(&rows, &summaries));
            if !comps.is_empty() {
                print!("{}", render_comparisons(&comps, cfg.alpha));
            }
        }
        OutputFormat::Csv => print!("{}", summary_csv(&summaries)),
        OutputFormat::Jsonl => print!("{}", records_jsonl(&rows, &summaries, &comps)),
    }
    Ok(())
}

fn cmd_compare(opts: &Opts, results: Option<&Path>) -> Result<(), CliError> {
    let format = opts.format()?;
    let alpha = ExperimentConfig::default().alpha;
    let rows = match results {
        Some(path) => read_folds_csv(path)?,
        None => evaluate(&opts.experiment()?)?,
    };
    let comps = compare(&rows, alpha)?;
    if let Some(dir) = &opts.out {
        std::fs::create_dir_all(dir)?;
        if results.is_none() {
            std::fs::write(dir.join("folds.csv"), folds_csv(&rows))?;
        }
        std::fs::write(dir.join("comparisons.csv"), comparisons_csv(&comps))?;
    }
    match format {
        OutputFormat::Table => print!("{}", render_comparisons(&comps, alpha)),
        OutputFormat::Csv => print!("{}", comparisons_csv(&comps)),
        OutputFormat::Jsonl => print!("{}", records_jsonl(&[], &[], &comps)),
    }
    Ok(())
}

fn cmd_fit(opts: &Opts, save: Option<&Path>) -> Result<(), CliError> {
    let path = opts.single_data()?;
    let data = load_csv_with(path, &opts.csv_options())?;
    let kind = match opts.roster(&[ModelKind::Bn])?.as_slice() {
        [m] if m.is_bicluster_model() => *m,
        _ => {
            return Err(CliError::Usage(
                "fit takes one of bn, bn-linear, bn-rbf in --models".into(),
            ))
        }
    };
    let learner = kind
        .learner(&opts.learner_params(), opts.seed)
        .expect("bicluster models have a learner");
    let grid = opts.grid();
    let cfg = if grid.t_d.len() == 1 && grid.tau.len() == 1 {
        bicneuron::BicNeuronConfig::new(grid.t_d[0], grid.t_m, grid.tau[0], learner)
    } else {
        grid_calibrate(&data, &grid, opts.inner_k, opts.seed, &learner)?.config(grid.t_m, learner)
    };
    let model = fit(&data, &cfg)?;
    if let Some(p) = save {
        model.save(p)?;
    }
    match opts.format()? {
        OutputFormat::Jsonl => println!(
            "{}",
            serde_json::json!({
                "dataset": dataset_name(path),
                "model": kind.name(),
                "columns": model.column_ids,
                "training_auc": model.training_auc,
                "t_d": cfg.biclustering.t_d,
                "tau": cfg.tau,
                "biclusters": model.diagnostics.n_biclusters,
                "pairs": model.diagnostics.n_pairs,
            })
        ),
        _ => {
            println!("model        {}", kind.name());
            println!("t_d          {}", cfg.biclustering.t_d);
            println!("tau          {}", cfg.tau);
            println!("biclusters   {}", model.diagnostics.n_biclusters);
            println!("pairs        {}", model.diagnostics.n_pairs);
            println!("columns      {}", model.column_ids.join(","));
            println!("training AUC {:.4}", model.training_auc);
        }
    }
    Ok(())
}

fn cmd_predict(opts: &Opts, model_path: &Path) -> Result<(), CliError> {
    let model = BicNeuronModel::load(model_path).map_err(|e| match e {
        PipelineError::Io(_) | PipelineError::Format(_) => CliError::Data(e.to_string()),
        other => other.into(),
    })?;
    let drop: Vec<&str> = opts.label_col.as_deref().into_iter().collect();
    let (matrix, truth) = load_features_csv(opts.single_data()?, opts.id_col.as_deref(), &drop)?;
    let mut out = String::from("id,prediction,score\n");
    let mut correct = 0;
    for i in 0..matrix.n_rows() {
        let x = matrix.row(i);
        let label = model.predict(x)?;
        let score = model.score(x)?;
        if truth.as_ref().is_some_and(|t| t[i] == label) {
            correct += 1;
        }
        out.push_str(&format!("{},{},{}\n", matrix.row_ids()[i], label, score));
    }
    match &opts.out {
        Some(p) => std::fs::write(p, out)?,
        None => print!("{out}"),
    }
    if truth.is_some() {
        eprintln!(
            "accuracy {:.4} ({correct}/{})",
            correct as f64 / matrix.n_rows() as f64,
            matrix.n_rows()
        );
    }
    Ok(())
}

fn cmd_synth(kind: &str, seed: u64, out: &Path) -> Result<(), CliError> {
    let data = match kind {
        "planted" => planted_subspace(&PlantedSpec::default(), seed).data,
        "noise" => uniform_noise(40, 60, 12, seed),
        other => return Err(CliError::Usage(format!("unknown synthetic kind {other:?}"))),
    };
    write_csv(&data, out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bicluster { opts, biclusters } => cmd_bicluster(&opts, biclusters.as_deref()),
        Command::Evaluate { opts } => cmd_evaluate(&opts),
        Command::Compare { opts, results } => cmd_compare(&opts, results.as_deref()),
        Command::Fit { opts, save } => cmd_fit(&opts, save.as_deref()),
        Command::Predict { opts, model } => cmd_predict(&opts, &model),
        Command::Synth { kind, seed, out } => cmd_synth(&kind, seed, &out),
    }
}

fn main() -> ExitCode {
    let argv = match splice_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
