//! C ABI over `bicneuron`.
//!
//! Handles are opaque heap objects owned by the caller and released with the
//! matching `*_free`. Every entry point returns a [`BnStatus`]; on failure the
//! message is kept per thread and read with [`bn_last_error_message`].
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bicneuron::dataset::{assign_roles, load_csv_with, CsvOptions, DataMatrix, DatasetError, LabeledDataset};
use bicneuron::perceptron::{Kernel, LearnerKind};
use bicneuron::pipeline::{fit, BicNeuronConfig, BicNeuronModel, PipelineError};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Data = 4,
    NoCoherentBiclusters = 5,
    NoDiscriminativeSubspace = 6,
    Runtime = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnLearner {
    Standard = 0,
    KernelLinear = 1,
    KernelRbf = 2,
}

/// Fit parameters. Start from [`bn_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BnConfig {
    pub t_d: f64,
    pub t_m: f64,
    pub tau: f64,
    pub learner: BnLearner,
    pub epochs: u32,
    pub learning_rate: f64,
    /// RBF width; ignored by the other learners.
    pub sigma: f64,
    /// Shuffle seed for the standard perceptron.
    pub seed: u64,
}

/// Labeled training data.
pub struct BnDataset(LabeledDataset);

/// A fitted model.
pub struct BnModel(BicNeuronModel);

struct Failure {
    status: BnStatus,
    message: String,
}

impl Failure {
    fn new(status: BnStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Failure::new(BnStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        let status = match e {
            DatasetError::MissingFile(_) | DatasetError::Io(_) => BnStatus::Io,
            _ => BnStatus::Data,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let status = match &e {
            PipelineError::Dataset(DatasetError::MissingFile(_) | DatasetError::Io(_)) => BnStatus::Io,
            PipelineError::Dataset(_) => BnStatus::Data,
            PipelineError::NoCoherentBiclusters => BnStatus::NoCoherentBiclusters,
            PipelineError::NoDiscriminativeSubspace => BnStatus::NoDiscriminativeSubspace,
            PipelineError::InvalidConfig(_) => BnStatus::InvalidArgument,
            PipelineError::Io(_) => BnStatus::Io,
            PipelineError::Format(_) => BnStatus::Data,
            _ => BnStatus::Runtime,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(message: Option<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            BnStatus::Ok
        }
        Ok(Err(fail)) => {
            set_error(Some(fail.message));
            fail.status
        }
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(Some(format!("panic: {text}")));
            BnStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(BnStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn optional_text(p: *const c_char, what: &str) -> Result<Option<String>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(|s| Some(s.to_string()))
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread, or NULL if the last call
/// succeeded. Free with [`bn_string_free`].
#[no_mangle]
pub extern "C" fn bn_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_deref() {
        Some(m) => CString::new(m.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn bn_config_default() -> BnConfig {
    BnConfig {
        t_d: 1.0,
        t_m: 0.02,
        tau: 0.9,
        learner: BnLearner::Standard,
        epochs: 20,
        learning_rate: 0.1,
        sigma: 0.1,
        seed: 0,
    }
}

fn to_config(c: &BnConfig) -> BicNeuronConfig {
    let epochs = c.epochs as usize;
    let learner = match c.learner {
        BnLearner::Standard => LearnerKind::Standard {
            learning_rate: c.learning_rate,
            epochs,
            seed: c.seed,
        },
        BnLearner::KernelLinear => LearnerKind::Kernel {
            kernel: Kernel::Linear,
            epochs,
        },
        BnLearner::KernelRbf => LearnerKind::Kernel {
            kernel: Kernel::Rbf { sigma: c.sigma },
            epochs,
        },
    };
    BicNeuronConfig::new(c.t_d, c.t_m, c.tau, learner)
}

/// Loads a labeled CSV. `label_col` NULL means the last column; `id_col` NULL
/// means no id column.
///
/// # Safety
/// String arguments must be NUL-terminated or NULL where allowed; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn bn_dataset_load_csv(
    path: *const c_char,
    label_col: *const c_char,
    id_col: *const c_char,
    out: *mut *mut BnDataset,
) -> BnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let path = text(path, "path")?;
        let options = CsvOptions {
            label_column: optional_text(label_col, "label_col")?,
            id_column: optional_text(id_col, "id_col")?,
        };
        put(out, BnDataset(load_csv_with(path, &options)?));
        Ok(())
    })
}

/// Builds a dataset from a row-major `n_rows * n_cols` array and one label per
/// row. Labels may be any two distinct values; the rarer one becomes class 1.
///
/// # Safety
/// `values` must hold `n_rows * n_cols` doubles and `labels` `n_rows` ints.
#[no_mangle]
pub unsafe extern "C" fn bn_dataset_from_arrays(
    values: *const f64,
    n_rows: usize,
    n_cols: usize,
    labels: *const i32,
    out: *mut *mut BnDataset,
) -> BnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let len = n_rows
            .checked_mul(n_cols)
            .ok_or_else(|| Failure::new(BnStatus::InvalidArgument, "n_rows * n_cols overflows"))?;
        let values = slice(values, len, "values")?;
        let labels = slice(labels, n_rows, "labels")?;
        let matrix = DataMatrix::new(
            values.to_vec(),
            n_rows,
            n_cols,
            (0..n_rows).map(|i| format!("r{i}")).collect(),
            (0..n_cols).map(|j| format!("c{j}")).collect(),
        )?;
        let names: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        let map = assign_roles(&names)?;
        let roles = names.iter().map(|n| map.role(n).unwrap_or(-1)).collect();
        put(out, BnDataset(LabeledDataset::new(matrix, roles, map)?));
        Ok(())
    })
}

/// # Safety
/// `ds` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_dataset_n_rows(ds: *const BnDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.n_rows())
}

/// # Safety
/// `ds` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_dataset_n_cols(ds: *const BnDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.n_cols())
}

/// # Safety
/// `ds` must come from this library and not be used afterwards, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_dataset_free(ds: *mut BnDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Fits a model on `ds`. `config` NULL means [`bn_config_default`].
///
/// # Safety
/// `ds` must be a live handle, `config` valid or NULL, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bn_model_fit(
    ds: *const BnDataset,
    config: *const BnConfig,
    out: *mut *mut BnModel,
) -> BnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let ds = handle(ds, "dataset")?;
        let cfg = config.as_ref().copied().unwrap_or_else(|| bn_config_default());
        put(out, BnModel(fit(&ds.0, &to_config(&cfg))?));
        Ok(())
    })
}

/// Predicts class roles for raw (unscaled) rows: `+1` is class 1, `-1` class 2.
/// `n_cols` must equal the training width.
///
/// # Safety
/// `values` must hold `n_rows * n_cols` doubles and `out_roles` room for
/// `n_rows` ints.
#[no_mangle]
pub unsafe extern "C" fn bn_model_predict(
    model: *const BnModel,
    values: *const f64,
    n_rows: usize,
    n_cols: usize,
    out_roles: *mut i32,
) -> BnStatus {
    guard(|| {
        let model = handle(model, "model")?;
        if n_cols != model.0.n_features() {
            return Err(Failure::from(DatasetError::DimensionMismatch {
                expected: model.0.n_features(),
                found: n_cols,
            }));
        }
        let len = n_rows
            .checked_mul(n_cols)
            .ok_or_else(|| Failure::new(BnStatus::InvalidArgument, "n_rows * n_cols overflows"))?;
        let values = slice(values, len, "values")?;
        if n_rows > 0 && out_roles.is_null() {
            return Err(Failure::null("out_roles"));
        }
        let mut roles = Vec::with_capacity(n_rows);
        for row in values.chunks(n_cols.max(1)).take(n_rows) {
            roles.push(model.0.predict_role(row)? as i32);
        }
        if n_rows > 0 {
            std::slice::from_raw_parts_mut(out_roles, n_rows).copy_from_slice(&roles);
        }
        Ok(())
    })
}

/// Original label text of a role (`+1` or `-1`). Free with [`bn_string_free`].
/// NULL on a bad handle or role.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_model_label(model: *const BnModel, role: i32) -> *mut c_char {
    match (model.as_ref(), role) {
        (Some(m), 1 | -1) => CString::new(m.0.label_map.name(role as i8)).map_or(ptr::null_mut(), CString::into_raw),
        _ => ptr::null_mut(),
    }
}

/// # Safety
/// `model` must be a live handle; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn bn_model_save(model: *const BnModel, path: *const c_char) -> BnStatus {
    guard(|| {
        let model = handle(model, "model")?;
        model.0.save(text(path, "path")?)?;
        Ok(())
    })
}

/// # Safety
/// `path` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bn_model_load(path: *const c_char, out: *mut *mut BnModel) -> BnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        put(out, BnModel(BicNeuronModel::load(text(path, "path")?)?));
        Ok(())
    })
}

/// Copies up to `cap` selected feature indices into `out` and returns how
/// many the model has. Pass `out` NULL to query the count.
///
/// # Safety
/// `out` must have room for `cap` entries or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_model_columns(model: *const BnModel, out: *mut usize, cap: usize) -> usize {
    let Some(model) = model.as_ref() else { return 0 };
    let cols = &model.0.columns;
    if !out.is_null() {
        let n = cols.len().min(cap);
        std::slice::from_raw_parts_mut(out, n).copy_from_slice(&cols[..n]);
    }
    cols.len()
}

/// NaN on a NULL handle.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_model_training_auc(model: *const BnModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.0.training_auc)
}

/// # Safety
/// `model` must come from this library and not be used afterwards, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn bn_model_free(model: *mut BnModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Mean squared residue of the submatrix `rows x cols` of a row-major matrix.
///
/// # Safety
/// Arrays must have the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bn_msr(
    values: *const f64,
    n_rows: usize,
    n_cols: usize,
    rows: *const usize,
    n_sel_rows: usize,
    cols: *const usize,
    n_sel_cols: usize,
    out: *mut f64,
) -> BnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let len = n_rows
            .checked_mul(n_cols)
            .ok_or_else(|| Failure::new(BnStatus::InvalidArgument, "n_rows * n_cols overflows"))?;
        let host = DataMatrix::new(
            slice(values, len, "values")?.to_vec(),
            n_rows,
            n_cols,
            (0..n_rows).map(|i| format!("r{i}")).collect(),
            (0..n_cols).map(|j| format!("c{j}")).collect(),
        )?;
        let rows = slice(rows, n_sel_rows, "rows")?;
        let cols = slice(cols, n_sel_cols, "cols")?;
        *out = bicneuron::msr(&host, rows, cols)
            .map_err(|e| Failure::new(BnStatus::InvalidArgument, e.to_string()))?;
        Ok(())
    })
}

/// Exact two-sided signed-rank p-value for `n` paired samples.
///
/// # Safety
/// `a` and `b` must hold `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bn_wilcoxon_exact(a: *const f64, b: *const f64, n: usize, out: *mut f64) -> BnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let a = slice(a, n, "a")?;
        let b = slice(b, n, "b")?;
        *out = bicneuron::wilcoxon_exact(a, b).map_err(|e| Failure::new(BnStatus::InvalidArgument, e.to_string()))?;
        Ok(())
    })
}
