//! C ABI for the prismcast forecasting library: opaque model handles,
//! integer status codes, and a thread-local last-error message. The
//! header is generated into `include/prismcast.h` at build time.

use prismcast::config_file::load_config;
use prismcast::data::read_csv;
use prismcast::error::Error;
use prismcast::eval::report::write_report;
use prismcast::eval::{run_backtest, BacktestModel, Horizon};
use prismcast::model::{fit, load_model, predict, save_model, FittedModel, ModelConfig};
use prismcast::synth::{write_scenario_csvs, ScenarioId, SynthScenario};
use prismcast::train::TrainConfig;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};

/// Operation outcome. Mirrors the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    /// Unspecified failure.
    Unknown = 1,
    /// Malformed CSV, config, model file or scenario id.
    Parse = 2,
    /// Not enough data for the requested operation.
    InsufficientData = 3,
    /// Training failed (non-finite gradients or diverged).
    Training = 4,
    /// A future regressor lacks values for requested timestamps.
    MissingRegressor = 5,
    /// A required pointer argument was null.
    NullArgument = 6,
    /// Invalid UTF-8 in a string argument.
    Utf8 = 7,
}

/// Opaque fitted-model handle. Create with `pc_fit_csv` or
/// `pc_model_load`; release with `pc_model_free`.
pub struct PcModel {
    inner: FittedModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> PcStatus {
    set_error(&e.to_string());
    match e.status_code() {
        2 => PcStatus::Parse,
        3 => PcStatus::InsufficientData,
        4 => PcStatus::Training,
        5 => PcStatus::MissingRegressor,
        _ => PcStatus::Unknown,
    }
}

unsafe fn path_arg(ptr: *const c_char) -> Result<PathBuf, PcStatus> {
    if ptr.is_null() {
        set_error("null path argument");
        return Err(PcStatus::NullArgument);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => {
            set_error("path argument is not valid UTF-8");
            Err(PcStatus::Utf8)
        }
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, PcStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(PcStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        PcStatus::Utf8
    })
}

fn load_configs(
    config_path: Option<&Path>,
    seed: u64,
) -> Result<(ModelConfig, TrainConfig), Error> {
    let (model, mut train) = match config_path {
        Some(p) => load_config(p)?,
        None => (ModelConfig::default(), TrainConfig::default()),
    };
    train.seed = seed;
    Ok((model, train))
}

fn into_handle(model: FittedModel) -> *mut PcModel {
    Box::into_raw(Box::new(PcModel { inner: model }))
}

unsafe fn model_ref<'a>(handle: *const PcModel) -> Result<&'a FittedModel, PcStatus> {
    if handle.is_null() {
        set_error("null model handle");
        return Err(PcStatus::NullArgument);
    }
    Ok(&(*handle).inner)
}

/// ABI version of this header; bump on breaking changes.
#[no_mangle]
pub extern "C" fn pc_abi_version() -> u32 {
    1
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Fits a model to a `ds,y[,...]` CSV. `config_path` may be null for the
/// default configuration. On success writes a handle to `out`.
///
/// # Safety
/// `data_csv` and `out` must be valid pointers; `config_path` may be null.
#[no_mangle]
pub unsafe extern "C" fn pc_fit_csv(
    data_csv: *const c_char,
    config_path: *const c_char,
    seed: u64,
    out: *mut *mut PcModel,
) -> PcStatus {
    if out.is_null() {
        set_error("null output handle");
        return PcStatus::NullArgument;
    }
    let data = match path_arg(data_csv) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let config = if config_path.is_null() {
        None
    } else {
        match path_arg(config_path) {
            Ok(p) => Some(p),
            Err(s) => return s,
        }
    };
    let result = (|| -> Result<FittedModel, Error> {
        let frame = read_csv(&data)?;
        let (model_cfg, train_cfg) = load_configs(config.as_deref(), seed)?;
        Ok(fit(&frame, &model_cfg, &train_cfg)?.model)
    })();
    match result {
        Ok(model) => {
            *out = into_handle(model);
            PcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Serializes a model to `path`.
///
/// # Safety
/// `model` must come from `pc_fit_csv`/`pc_model_load`; `path` must be a
/// valid C string.
#[no_mangle]
pub unsafe extern "C" fn pc_model_save(model: *const PcModel, path: *const c_char) -> PcStatus {
    let model = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match save_model(model, &path) {
        Ok(()) => PcStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Loads a serialized model from `path` into a fresh handle.
///
/// # Safety
/// `path` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pc_model_load(path: *const c_char, out: *mut *mut PcModel) -> PcStatus {
    if out.is_null() {
        set_error("null output handle");
        return PcStatus::NullArgument;
    }
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match load_model(&path) {
        Ok(model) => {
            *out = into_handle(model);
            PcStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Number of horizon steps the model forecasts per origin; 0 on a null
/// handle.
///
/// # Safety
/// `model` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn pc_model_horizon(model: *const PcModel) -> usize {
    match model_ref(model) {
        Ok(m) => m.spec.horizon,
        Err(_) => 0,
    }
}

/// Forecasts over the timestamps of `data_csv` and writes the forecast
/// frame to `out_csv`; `decompose` adds per-component columns.
///
/// # Safety
/// All pointers must be valid; `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_predict_csv(
    model: *const PcModel,
    data_csv: *const c_char,
    out_csv: *const c_char,
    decompose: bool,
) -> PcStatus {
    let model = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    let data = match path_arg(data_csv) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let out = match path_arg(out_csv) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let result = (|| -> Result<(), Error> {
        let frame = read_csv(&data)?;
        let forecast = predict(model, &frame)?;
        prismcast::data::write_forecast_csv(&forecast, decompose, &out)
    })();
    match result {
        Ok(()) => PcStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Runs the expanding-origin backtest and writes the per-fold report.
/// `horizons` is comma-separated (`"1,3"` or `"inf"`); `naive` evaluates
/// the last-value reference model instead of a configured fit.
///
/// # Safety
/// `data_csv`, `horizons` and `report_out` must be valid C strings;
/// `config_path` may be null.
#[no_mangle]
pub unsafe extern "C" fn pc_backtest_csv(
    data_csv: *const c_char,
    config_path: *const c_char,
    horizons: *const c_char,
    report_out: *const c_char,
    seed: u64,
    naive: bool,
) -> PcStatus {
    let data = match path_arg(data_csv) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let config = if config_path.is_null() {
        None
    } else {
        match path_arg(config_path) {
            Ok(p) => Some(p),
            Err(s) => return s,
        }
    };
    let horizons = match str_arg(horizons) {
        Ok(h) => h,
        Err(s) => return s,
    };
    let report_path = match path_arg(report_out) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let result = (|| -> Result<(), Error> {
        let frame = read_csv(&data)?;
        let horizons = horizons
            .split(',')
            .map(Horizon::parse)
            .collect::<Result<Vec<_>, _>>()?;
        let model = if naive {
            BacktestModel::Naive
        } else {
            let (model_cfg, train_cfg) = load_configs(config.as_deref(), seed)?;
            BacktestModel::Configured {
                name: "configured".into(),
                config: model_cfg,
                train: train_cfg,
            }
        };
        let report = run_backtest(
            &frame,
            &model,
            &horizons,
            prismcast::eval::DEFAULT_FOLDS,
            prismcast::eval::DEFAULT_TEST_FRAC,
            prismcast::eval::DEFAULT_STEP_FRAC,
        )?;
        write_report(&report, &report_path)
    })();
    match result {
        Ok(()) => PcStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Generates a synthetic benchmark scenario's CSVs and manifest into
/// `out_dir`.
///
/// # Safety
/// `scenario` and `out_dir` must be valid C strings.
#[no_mangle]
pub unsafe extern "C" fn pc_synth(
    scenario: *const c_char,
    seed: u64,
    out_dir: *const c_char,
) -> PcStatus {
    let scenario = match str_arg(scenario) {
        Ok(s) => s,
        Err(s) => return s,
    };
    let out_dir = match path_arg(out_dir) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let result = (|| -> Result<(), Error> {
        let id = ScenarioId::parse(scenario)?;
        write_scenario_csvs(&SynthScenario::new(id, seed), &out_dir)?;
        Ok(())
    })();
    match result {
        Ok(()) => PcStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Releases a model handle. Passing null is a no-op.
///
/// # Safety
/// `model` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_model_free(model: *mut PcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}
