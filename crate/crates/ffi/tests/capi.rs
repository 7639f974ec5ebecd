//! Exercises the C ABI exactly as a foreign binding would: C strings in,
//! status codes out, opaque handles round-tripped through save/load.

use prismcast_ffi::{
    pc_abi_version, pc_backtest_csv, pc_fit_csv, pc_last_error_message, pc_model_free,
    pc_model_horizon, pc_model_load, pc_model_save, pc_predict_csv, pc_synth, PcModel, PcStatus,
};
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::ptr;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn work_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("prismcast_ffi").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_series_csv(path: &Path, n: usize) {
    let mut text = String::from("ds,y\n");
    for i in 0..n {
        let y = 2.0 + 0.01 * i as f64 + (std::f64::consts::TAU * i as f64 / 7.0).sin();
        text.push_str(&format!(
            "{},{y}\n",
            prismcast::data::format_timestamp(86_400 * i as i64)
        ));
    }
    std::fs::write(path, text).unwrap();
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(pc_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn abi_version_is_one() {
    assert_eq!(pc_abi_version(), 1);
}

#[test]
fn fit_save_load_predict_round_trip() {
    let dir = work_dir("roundtrip");
    let data = dir.join("data.csv");
    write_series_csv(&data, 120);
    let config = dir.join("cfg.toml");
    std::fs::write(&config, "[train]\nepochs = 20\nlearning_rate = 0.05\n").unwrap();

    let data_c = c(data.to_str().unwrap());
    let config_c = c(config.to_str().unwrap());
    let mut handle: *mut PcModel = ptr::null_mut();
    let status = unsafe { pc_fit_csv(data_c.as_ptr(), config_c.as_ptr(), 7, &mut handle) };
    assert_eq!(status, PcStatus::Ok, "{}", last_error());
    assert!(!handle.is_null());
    assert_eq!(unsafe { pc_model_horizon(handle) }, 1);

    let model_path = c(dir.join("model.json").to_str().unwrap());
    assert_eq!(
        unsafe { pc_model_save(handle, model_path.as_ptr()) },
        PcStatus::Ok
    );

    let mut loaded: *mut PcModel = ptr::null_mut();
    assert_eq!(
        unsafe { pc_model_load(model_path.as_ptr(), &mut loaded) },
        PcStatus::Ok
    );

    let out_a = c(dir.join("fc_a.csv").to_str().unwrap());
    let out_b = c(dir.join("fc_b.csv").to_str().unwrap());
    assert_eq!(
        unsafe { pc_predict_csv(handle, data_c.as_ptr(), out_a.as_ptr(), true) },
        PcStatus::Ok
    );
    assert_eq!(
        unsafe { pc_predict_csv(loaded, data_c.as_ptr(), out_b.as_ptr(), true) },
        PcStatus::Ok
    );
    let a = std::fs::read(dir.join("fc_a.csv")).unwrap();
    let b = std::fs::read(dir.join("fc_b.csv")).unwrap();
    assert_eq!(a, b, "in-memory and loaded models must predict identically");

    unsafe {
        pc_model_free(handle);
        pc_model_free(loaded);
        pc_model_free(ptr::null_mut()); // null is a no-op
    }
}

#[test]
fn null_arguments_are_reported() {
    let mut handle: *mut PcModel = ptr::null_mut();
    assert_eq!(
        unsafe { pc_fit_csv(ptr::null(), ptr::null(), 0, &mut handle) },
        PcStatus::NullArgument
    );
    assert!(last_error().contains("null"));
    let data = c("whatever.csv");
    assert_eq!(
        unsafe { pc_fit_csv(data.as_ptr(), ptr::null(), 0, ptr::null_mut()) },
        PcStatus::NullArgument
    );
}

#[test]
fn status_codes_mirror_error_classes() {
    let dir = work_dir("statuses");
    // missing file -> parse error
    let missing = c(dir.join("nope.csv").to_str().unwrap());
    let mut handle: *mut PcModel = ptr::null_mut();
    assert_eq!(
        unsafe { pc_fit_csv(missing.as_ptr(), ptr::null(), 0, &mut handle) },
        PcStatus::Parse
    );
    assert!(!last_error().is_empty());

    // insufficient data for the configured lags
    let tiny = dir.join("tiny.csv");
    write_series_csv(&tiny, 6);
    let config = dir.join("cfg.toml");
    std::fs::write(&config, "[ar]\nn_lags = 10\n").unwrap();
    let tiny_c = c(tiny.to_str().unwrap());
    let config_c = c(config.to_str().unwrap());
    assert_eq!(
        unsafe { pc_fit_csv(tiny_c.as_ptr(), config_c.as_ptr(), 0, &mut handle) },
        PcStatus::InsufficientData
    );

    // unknown synth scenario -> parse
    let out_dir = c(dir.to_str().unwrap());
    let bad = c("S-XX");
    assert_eq!(
        unsafe { pc_synth(bad.as_ptr(), 0, out_dir.as_ptr()) },
        PcStatus::Parse
    );
}

#[test]
fn backtest_and_synth_produce_files() {
    let dir = work_dir("bt");
    let data = dir.join("data.csv");
    write_series_csv(&data, 250);
    let report = dir.join("report.csv");
    let status = unsafe {
        pc_backtest_csv(
            c(data.to_str().unwrap()).as_ptr(),
            ptr::null(),
            c("1").as_ptr(),
            c(report.to_str().unwrap()).as_ptr(),
            3,
            true,
        )
    };
    assert_eq!(status, PcStatus::Ok, "{}", last_error());
    assert!(std::fs::read_to_string(&report)
        .unwrap()
        .starts_with("model,fold,horizon"));

    let synth_dir = dir.join("synth");
    let status = unsafe {
        pc_synth(
            c("S-EF").as_ptr(),
            5,
            c(synth_dir.to_str().unwrap()).as_ptr(),
        )
    };
    assert_eq!(status, PcStatus::Ok, "{}", last_error());
    assert!(synth_dir.join("S-EF_0.csv").exists());
    assert!(synth_dir.join("S-EF_manifest.json").exists());
}

#[test]
fn generated_header_declares_the_surface() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/prismcast.h"))
            .expect("header generated at build time");
    for symbol in [
        "typedef struct PcModel PcModel;",
        "pc_fit_csv",
        "pc_model_save",
        "pc_model_load",
        "pc_predict_csv",
        "pc_backtest_csv",
        "pc_synth",
        "pc_model_free",
        "pc_last_error_message",
        "PC_STATUS_MISSING_REGRESSOR",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}
