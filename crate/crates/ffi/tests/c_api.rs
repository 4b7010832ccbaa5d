use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use bicneuron::synthetic::{planted_subspace, write_csv, PlantedSpec};
use bicneuron_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = bn_last_error_message();
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { bn_string_free(p) };
    Some(s)
}

fn planted_csv(dir: &Path) -> PathBuf {
    let path = dir.join("planted.csv");
    write_csv(&planted_subspace(&PlantedSpec::default(), 4).data, &path).unwrap();
    path
}

fn fit_config() -> BnConfig {
    BnConfig {
        t_d: 0.5,
        tau: 0.5,
        ..bn_config_default()
    }
}

#[test]
fn load_fit_predict_save_load() {
    let dir = tempfile::tempdir().unwrap();
    let csv = cstr(planted_csv(dir.path()).to_str().unwrap());
    let id = cstr("id");
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(bn_dataset_load_csv(csv.as_ptr(), ptr::null(), id.as_ptr(), &mut ds), BnStatus::Ok);
        assert_eq!(bn_dataset_n_rows(ds), 100);
        let width = bn_dataset_n_cols(ds);

        let mut model = ptr::null_mut();
        assert_eq!(bn_model_fit(ds, &fit_config(), &mut model), BnStatus::Ok);
        assert!(last_error().is_none());
        let n = bn_model_columns(model, ptr::null_mut(), 0);
        let mut cols = vec![0usize; n];
        assert_eq!(bn_model_columns(model, cols.as_mut_ptr(), n), n);
        assert!(cols.iter().all(|&c| c < width));

        let rows = vec![0.5; 3 * width];
        let mut roles = [0i32; 3];
        assert_eq!(bn_model_predict(model, rows.as_ptr(), 3, width, roles.as_mut_ptr()), BnStatus::Ok);
        assert!(roles.iter().all(|r| *r == 1 || *r == -1));
        assert_eq!(
            bn_model_predict(model, rows.as_ptr(), 1, width - 1, roles.as_mut_ptr()),
            BnStatus::Data
        );
        assert!(last_error().unwrap().contains("dimension mismatch"));

        let label = bn_model_label(model, 1);
        assert_eq!(CStr::from_ptr(label).to_str().unwrap(), "planted");
        bn_string_free(label);
        assert!(bn_model_label(model, 0).is_null());

        let file = cstr(dir.path().join("m.json").to_str().unwrap());
        assert_eq!(bn_model_save(model, file.as_ptr()), BnStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(bn_model_load(file.as_ptr(), &mut again), BnStatus::Ok);
        assert_eq!(bn_model_training_auc(again), bn_model_training_auc(model));
        let mut roles2 = [0i32; 3];
        bn_model_predict(again, rows.as_ptr(), 3, width, roles2.as_mut_ptr());
        assert_eq!(roles, roles2);

        bn_model_free(again);
        bn_model_free(model);
        bn_dataset_free(ds);
    }
}

#[test]
fn arrays_with_arbitrary_labels() {
    // four rows of label 7 (minority) against eight of 3
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for i in 0..12 {
        let t = i as f64 / 12.0;
        if i < 4 {
            values.extend([0.1 + 0.01 * t, 0.2 + 0.01 * t, 0.9 - t]);
            labels.push(7);
        } else {
            values.extend([0.9 - 0.3 * t, 0.1 + 0.7 * t, t]);
            labels.push(3);
        }
    }
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(bn_dataset_from_arrays(values.as_ptr(), 12, 3, labels.as_ptr(), &mut ds), BnStatus::Ok);
        assert_eq!((bn_dataset_n_rows(ds), bn_dataset_n_cols(ds)), (12, 3));
        let mut model = ptr::null_mut();
        let cfg = BnConfig {
            tau: 5.0,
            ..bn_config_default()
        };
        assert_eq!(bn_model_fit(ds, &cfg, &mut model), BnStatus::Ok);
        let label = bn_model_label(model, 1);
        assert_eq!(CStr::from_ptr(label).to_str().unwrap(), "7");
        bn_string_free(label);
        bn_model_free(model);
        bn_dataset_free(ds);

        let one_class = [1i32; 12];
        assert_eq!(
            bn_dataset_from_arrays(values.as_ptr(), 12, 3, one_class.as_ptr(), &mut ds),
            BnStatus::Data
        );
        let nan = [f64::NAN; 36];
        assert_eq!(bn_dataset_from_arrays(nan.as_ptr(), 12, 3, labels.as_ptr(), &mut ds), BnStatus::Data);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(bn_dataset_load_csv(ptr::null(), ptr::null(), ptr::null(), &mut ds), BnStatus::NullPointer);
        assert_eq!(last_error().unwrap(), "path is null");
        let missing = cstr("does/not/exist.csv");
        assert_eq!(bn_dataset_load_csv(missing.as_ptr(), ptr::null(), ptr::null(), &mut ds), BnStatus::Io);
        assert!(ds.is_null());

        let mut model = ptr::null_mut();
        assert_eq!(bn_model_fit(ptr::null(), ptr::null(), &mut model), BnStatus::NullPointer);
        assert_eq!(bn_model_load(missing.as_ptr(), &mut model), BnStatus::Io);
        assert!(bn_model_training_auc(ptr::null()).is_nan());
        assert_eq!(bn_model_columns(ptr::null(), ptr::null_mut(), 0), 0);
        bn_model_free(ptr::null_mut());
        bn_dataset_free(ptr::null_mut());
        bn_string_free(ptr::null_mut());

        // invalid tau
        let values = [0.0, 1.0, 0.5, 0.2];
        let labels = [1, -1, -1, 1];
        assert_eq!(bn_dataset_from_arrays(values.as_ptr(), 4, 1, labels.as_ptr(), &mut ds), BnStatus::Ok);
        let cfg = BnConfig {
            tau: -1.0,
            ..bn_config_default()
        };
        assert_eq!(bn_model_fit(ds, &cfg, &mut model), BnStatus::InvalidArgument);
        bn_dataset_free(ds);
    }
}

#[test]
fn no_subspace_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noise.csv");
    write_csv(&bicneuron::synthetic::uniform_noise(40, 60, 12, 0), &path).unwrap();
    let csv = cstr(path.to_str().unwrap());
    let id = cstr("id");
    unsafe {
        let mut ds = ptr::null_mut();
        assert_eq!(bn_dataset_load_csv(csv.as_ptr(), ptr::null(), id.as_ptr(), &mut ds), BnStatus::Ok);
        let cfg = BnConfig {
            t_d: 0.5,
            tau: 0.1,
            ..bn_config_default()
        };
        let mut model = ptr::null_mut();
        assert_eq!(bn_model_fit(ds, &cfg, &mut model), BnStatus::NoDiscriminativeSubspace);
        assert!(model.is_null());
        bn_dataset_free(ds);
    }
}

#[test]
fn numeric_helpers() {
    // rows 0..2 of an additive matrix: residue zero
    let m = [1.0, 2.0, 4.0, 2.0, 3.0, 5.0, 9.0, 0.0, 1.0];
    let rows = [0usize, 1];
    let cols = [0usize, 1, 2];
    let mut out = -1.0;
    unsafe {
        assert_eq!(bn_msr(m.as_ptr(), 3, 3, rows.as_ptr(), 2, cols.as_ptr(), 3, &mut out), BnStatus::Ok);
        assert!(out.abs() < 1e-15);
        let bad = [5usize];
        assert_eq!(
            bn_msr(m.as_ptr(), 3, 3, bad.as_ptr(), 1, cols.as_ptr(), 3, &mut out),
            BnStatus::InvalidArgument
        );
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [0.0; 5];
        assert_eq!(bn_wilcoxon_exact(a.as_ptr(), b.as_ptr(), 5, &mut out), BnStatus::Ok);
        assert_eq!(out, 0.0625);
        let long = [1.0; 30];
        let zeros = [0.0; 30];
        assert_eq!(
            bn_wilcoxon_exact(long.as_ptr(), zeros.as_ptr(), 30, &mut out),
            BnStatus::InvalidArgument
        );
    }
}

fn target_dir() -> PathBuf {
    // .../target/debug/deps/c_api-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libbicneuron_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = planted_csv(dir.path());
    let out = Command::new(&exe).arg(&csv).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
