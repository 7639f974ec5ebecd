//! K-fold expanding-origin backtest with an inner rolling-origin
//! multi-step evaluation: training windows grow fold by fold while test
//! windows roll forward at constant size; within a test fold the forecast
//! origin advances one step at a time, updating lag inputs with observed
//! values but never refitting parameters.

use super::metrics::{mae, mase, rmse, rmsse};
use crate::data::Frame;
use crate::error::{Error, Result};
use crate::model::config::ModelConfig;
use crate::model::predict::PredictionContext;
use crate::model::{fit, FittedModel};
use crate::train::TrainConfig;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_TEST_FRAC: f64 = 0.10;
pub const DEFAULT_STEP_FRAC: f64 = 0.05;

/// One train/test split: train is `[0, train_end)`, test is
/// `[test_start, test_end)`, both as row indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoldSpec {
    pub index: usize,
    pub train_end: usize,
    pub test_start: usize,
    pub test_end: usize,
}

/// Expanding-origin folds: fold `i` of `k` trains on the first
/// `1 - test_frac - (k - i) * step_frac` of the data and tests on the next
/// `test_frac`. With defaults, consecutive test folds overlap by half.
pub fn make_folds(t: usize, k: usize, test_frac: f64, step_frac: f64) -> Result<Vec<FoldSpec>> {
    if k == 0 {
        return Err(Error::Config("fold count must be at least 1".into()));
    }
    // nudge products like 0.9 * 100 = 89.999... back onto their integer
    // before flooring
    let floor_idx = |frac: f64| -> usize {
        let raw = frac * t as f64;
        (raw + 1e-9 * raw.abs().max(1.0)).floor() as usize
    };
    let test_len = floor_idx(test_frac);
    let base_frac = 1.0 - test_frac - (k - 1) as f64 * step_frac;
    if test_len < 1 || base_frac <= 0.0 {
        return Err(Error::InsufficientData {
            required: (1.0 / test_frac).ceil() as usize,
            actual: t,
        });
    }
    let mut folds = Vec::with_capacity(k);
    for i in 1..=k {
        let train_frac = base_frac + (i - 1) as f64 * step_frac;
        let train_end = floor_idx(train_frac);
        if train_end < 2 {
            return Err(Error::InsufficientData {
                required: 2,
                actual: train_end,
            });
        }
        folds.push(FoldSpec {
            index: i,
            train_end,
            test_start: train_end,
            test_end: (train_end + test_len).min(t),
        });
    }
    Ok(folds)
}

/// Forecast horizon for a backtest task. `Unbounded` forecasts the entire
/// test fold at once, as time-only models can.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Horizon {
    Steps(usize),
    Unbounded,
}

impl Horizon {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") || s == "∞" {
            return Ok(Self::Unbounded);
        }
        let steps: usize = s
            .parse()
            .map_err(|_| Error::Config(format!("bad horizon '{s}'")))?;
        if steps == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        Ok(Self::Steps(steps))
    }
}

impl std::fmt::Display for Horizon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Steps(h) => write!(f, "{h}"),
            Self::Unbounded => write!(f, "inf"),
        }
    }
}

/// The model under evaluation: a configured fit, or the naive reference
/// predictor `yhat_{t+i} = y_{t-1}`.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum BacktestModel {
    Configured {
        name: String,
        config: ModelConfig,
        train: TrainConfig,
    },
    Naive,
}

impl BacktestModel {
    fn name(&self) -> String {
        match self {
            Self::Configured { name, .. } => name.clone(),
            Self::Naive => "naive".into(),
        }
    }
}

/// Per-fold, per-horizon outcome. A failed fold carries its error message
/// instead of metrics.
#[derive(Debug, Clone)]
pub struct FoldRecord {
    pub model: String,
    pub fold: usize,
    pub horizon: Horizon,
    pub mase: f64,
    pub rmsse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub train_seconds: f64,
    pub predict_seconds: f64,
    pub error: Option<String>,
}

/// Mean and standard deviation of each metric across succeeded folds.
#[derive(Debug, Clone)]
pub struct HorizonSummary {
    pub model: String,
    pub horizon: Horizon,
    pub folds: usize,
    pub mase: (f64, f64),
    pub rmsse: (f64, f64),
    pub rmse: (f64, f64),
    pub mae: (f64, f64),
    pub train_seconds: (f64, f64),
    pub predict_seconds: (f64, f64),
}

#[derive(Debug, Clone, Default)]
pub struct BacktestReport {
    pub records: Vec<FoldRecord>,
    pub summaries: Vec<HorizonSummary>,
}

/// Observed/predicted pairs flattened over all origins and horizon steps.
#[derive(Debug, Default)]
pub struct EvalPairs {
    pub y: Vec<f64>,
    pub yhat: Vec<f64>,
    pub origins: usize,
}

/// Rolling-origin evaluation of a fitted model over one test fold: the
/// origin advances one step at a time, lag inputs update with observed
/// values, parameters never change. Origins lacking a complete target
/// window are skipped.
pub fn rolling_origin_eval(
    model: &FittedModel,
    frame: &Frame,
    fold: &FoldSpec,
    horizon: Horizon,
) -> Result<EvalPairs> {
    let ctx = PredictionContext::new(model, frame)?;
    let mut pairs = EvalPairs::default();
    match horizon {
        Horizon::Unbounded => {
            for row in fold.test_start..fold.test_end {
                let actual = frame.y[row];
                if actual.is_nan() {
                    continue;
                }
                pairs.y.push(actual);
                pairs.yhat.push(ctx.time_only_value(row));
            }
            pairs.origins = pairs.y.len();
        }
        Horizon::Steps(h) => {
            if h != model.spec.horizon {
                return Err(Error::Config(format!(
                    "model fitted for horizon {} cannot evaluate horizon {h}",
                    model.spec.horizon
                )));
            }
            let mut scratch = ctx.scratch();
            let last_origin = fold.test_end.saturating_sub(h);
            for origin in fold.test_start..=last_origin {
                if !ctx.origin_valid(origin) {
                    continue;
                }
                let yhat = ctx.forecast(origin, &mut scratch);
                pairs.origins += 1;
                for (i, &p) in yhat.iter().enumerate() {
                    let actual = frame.y[origin + i];
                    if actual.is_nan() {
                        continue;
                    }
                    pairs.y.push(actual);
                    pairs.yhat.push(p);
                }
            }
        }
    }
    Ok(pairs)
}

fn naive_eval(frame: &Frame, fold: &FoldSpec, h: usize) -> EvalPairs {
    let mut pairs = EvalPairs::default();
    let last_origin = fold.test_end.saturating_sub(h);
    for origin in fold.test_start..=last_origin {
        if origin == 0 {
            continue;
        }
        let last = frame.y[origin - 1];
        if last.is_nan() {
            continue;
        }
        pairs.origins += 1;
        for i in 0..h {
            let actual = frame.y[origin + i];
            if actual.is_nan() {
                continue;
            }
            pairs.y.push(actual);
            pairs.yhat.push(last);
        }
    }
    pairs
}

/// Runs the full expanding-origin backtest: one fit per fold, rolling
/// origin evaluation, wall-clock timings, and mean/std aggregation. A
/// failed fold is recorded, not fatal.
pub fn run_backtest(
    frame: &Frame,
    model: &BacktestModel,
    horizons: &[Horizon],
    k: usize,
    test_frac: f64,
    step_frac: f64,
) -> Result<BacktestReport> {
    let folds = make_folds(frame.len(), k, test_frac, step_frac)?;
    let mut report = BacktestReport::default();
    for &horizon in horizons {
        for fold in &folds {
            let record = run_fold(frame, model, fold, horizon);
            report.records.push(record);
        }
        report
            .summaries
            .push(summarize(&report.records, &model.name(), horizon));
    }
    Ok(report)
}

fn run_fold(frame: &Frame, model: &BacktestModel, fold: &FoldSpec, horizon: Horizon) -> FoldRecord {
    let mut record = FoldRecord {
        model: model.name(),
        fold: fold.index,
        horizon,
        mase: f64::NAN,
        rmsse: f64::NAN,
        rmse: f64::NAN,
        mae: f64::NAN,
        train_seconds: 0.0,
        predict_seconds: 0.0,
        error: None,
    };
    let train_y = &frame.y[..fold.train_end];
    let outcome = (|| -> Result<()> {
        let pairs = match model {
            BacktestModel::Naive => {
                let Horizon::Steps(h) = horizon else {
                    return Err(Error::Config(
                        "the naive reference model needs a finite horizon".into(),
                    ));
                };
                let start = Instant::now();
                let pairs = naive_eval(frame, fold, h);
                record.predict_seconds = start.elapsed().as_secs_f64();
                pairs
            }
            BacktestModel::Configured {
                config, train: tc, ..
            } => {
                let mut config = config.clone();
                match horizon {
                    Horizon::Steps(h) => config.horizon = h,
                    Horizon::Unbounded => {
                        if config.ar.is_some() || !config.lagged_regressors.is_empty() {
                            return Err(Error::Config(
                                "an unbounded horizon needs a time-only model".into(),
                            ));
                        }
                        config.horizon = 1;
                    }
                }
                let train_frame = slice_frame(frame, fold.train_end);
                let start = Instant::now();
                let fitted = fit(&train_frame, &config, tc)?;
                record.train_seconds = start.elapsed().as_secs_f64();
                let start = Instant::now();
                let pairs = rolling_origin_eval(&fitted.model, frame, fold, horizon)?;
                record.predict_seconds = start.elapsed().as_secs_f64();
                pairs
            }
        };
        if pairs.y.is_empty() {
            return Err(Error::InsufficientData {
                required: 1,
                actual: 0,
            });
        }
        record.mase = mase(train_y, &pairs.y, &pairs.yhat)?;
        record.rmsse = rmsse(train_y, &pairs.y, &pairs.yhat)?;
        record.rmse = rmse(&pairs.y, &pairs.yhat);
        record.mae = mae(&pairs.y, &pairs.yhat);
        Ok(())
    })();
    if let Err(e) = outcome {
        record.error = Some(e.to_string());
    }
    record
}

fn slice_frame(frame: &Frame, end: usize) -> Frame {
    Frame {
        timestamps: frame.timestamps[..end].to_vec(),
        freq: frame.freq,
        y: frame.y[..end].to_vec(),
        extras: frame
            .extras
            .iter()
            .map(|(n, v)| (n.clone(), v[..end].to_vec()))
            .collect(),
    }
}

fn summarize(records: &[FoldRecord], model: &str, horizon: Horizon) -> HorizonSummary {
    let ok: Vec<&FoldRecord> = records
        .iter()
        .filter(|r| r.model == model && r.horizon == horizon && r.error.is_none())
        .collect();
    let stat = |f: fn(&FoldRecord) -> f64| -> (f64, f64) {
        if ok.is_empty() {
            return (f64::NAN, f64::NAN);
        }
        let n = ok.len() as f64;
        let mean = ok.iter().map(|r| f(r)).sum::<f64>() / n;
        let var = if ok.len() > 1 {
            ok.iter().map(|r| (f(r) - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        (mean, var.sqrt())
    };
    HorizonSummary {
        model: model.to_string(),
        horizon,
        folds: ok.len(),
        mase: stat(|r| r.mase),
        rmsse: stat(|r| r.rmsse),
        rmse: stat(|r| r.rmse),
        mae: stat(|r| r.mae),
        train_seconds: stat(|r| r.train_seconds),
        predict_seconds: stat(|r| r.predict_seconds),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_boundaries_match_reference_indices() {
        let folds = make_folds(100, 5, 0.10, 0.05).unwrap();
        let want = [
            (70, 70, 80),
            (75, 75, 85),
            (80, 80, 90),
            (85, 85, 95),
            (90, 90, 100),
        ];
        for (fold, (train_end, test_start, test_end)) in folds.iter().zip(want) {
            assert_eq!(fold.train_end, train_end);
            assert_eq!(fold.test_start, test_start);
            assert_eq!(fold.test_end, test_end);
        }
    }

    #[test]
    fn single_fold_is_a_90_10_split() {
        let folds = make_folds(100, 1, 0.10, 0.05).unwrap();
        assert_eq!(folds.len(), 1);
        assert_eq!(folds[0].train_end, 90);
        assert_eq!(folds[0].test_end, 100);
    }

    #[test]
    fn tiny_series_is_insufficient() {
        assert!(make_folds(5, 5, 0.10, 0.05).is_err());
    }

    #[test]
    fn fold_invariants_on_odd_lengths() {
        for t in [97usize, 123, 1001] {
            let folds = make_folds(t, 5, 0.10, 0.05).unwrap();
            let test_len = (0.10 * t as f64).floor() as usize;
            for f in &folds {
                assert_eq!(f.test_start, f.train_end);
                assert!(f.test_end <= t);
                assert_eq!(f.test_end - f.test_start, test_len);
            }
            for w in folds.windows(2) {
                assert!(w[1].train_end > w[0].train_end);
            }
        }
    }

    #[test]
    fn horizon_parsing() {
        assert_eq!(Horizon::parse("3").unwrap(), Horizon::Steps(3));
        assert_eq!(Horizon::parse("inf").unwrap(), Horizon::Unbounded);
        assert!(Horizon::parse("0").is_err());
        assert!(Horizon::parse("abc").is_err());
    }

    #[test]
    fn naive_reference_scores_near_one_on_a_random_walk() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 2000;
        let mut y = vec![0.0f64];
        for _ in 1..n {
            let step: f64 = rng.random_range(-1.0..1.0);
            y.push(y.last().unwrap() + step);
        }
        let ts: Vec<i64> = (0..n as i64).map(|d| d * 86_400).collect();
        let frame = Frame::from_raw(&ts, y, vec![]).unwrap();
        let report = run_backtest(
            &frame,
            &BacktestModel::Naive,
            &[Horizon::Steps(1)],
            5,
            0.10,
            0.05,
        )
        .unwrap();
        let summary = &report.summaries[0];
        assert_eq!(summary.folds, 5);
        assert!(
            (summary.mase.0 - 1.0).abs() < 0.1,
            "naive mase {}",
            summary.mase.0
        );
    }

    #[test]
    fn rolling_origin_counts_complete_origins() {
        // 10 test rows, h=3: origins test_start ..= test_end-3, i.e. 8
        let fold = FoldSpec {
            index: 1,
            train_end: 90,
            test_start: 90,
            test_end: 100,
        };
        let n = 100;
        let y: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() + 2.0).collect();
        let ts: Vec<i64> = (0..n as i64).map(|d| d * 86_400).collect();
        let frame = Frame::from_raw(&ts, y, vec![]).unwrap();
        let pairs = naive_eval(&frame, &fold, 3);
        assert_eq!(pairs.origins, 8);
        assert_eq!(pairs.y.len(), 24);
        let pairs = naive_eval(&frame, &fold, 1);
        assert_eq!(pairs.origins, 10);
    }

    #[test]
    fn summary_mean_matches_hand_computed_fold_mean() {
        let n = 400;
        let y: Vec<f64> = (0..n)
            .map(|i| (i as f64 * 0.53).sin() * 3.0 + 10.0)
            .collect();
        let ts: Vec<i64> = (0..n as i64).map(|d| d * 86_400).collect();
        let frame = Frame::from_raw(&ts, y, vec![]).unwrap();
        let report = run_backtest(
            &frame,
            &BacktestModel::Naive,
            &[Horizon::Steps(2)],
            5,
            0.10,
            0.05,
        )
        .unwrap();
        let mean = report.records.iter().map(|r| r.mase).sum::<f64>() / 5.0;
        assert!((report.summaries[0].mase.0 - mean).abs() < 1e-12);
    }

    #[test]
    fn unbounded_horizon_forecasts_the_whole_test_fold() {
        let n = 300;
        // a clean trend so the time-only model evaluates sanely
        let y: Vec<f64> = (0..n).map(|i| 1.0 + 0.05 * i as f64).collect();
        let ts: Vec<i64> = (0..n as i64).map(|d| d * 86_400).collect();
        let frame = Frame::from_raw(&ts, y, vec![]).unwrap();
        let config = ModelConfig {
            seasonality: crate::model::config::SeasonalityChoice::Off,
            ..ModelConfig::default()
        };
        let model = BacktestModel::Configured {
            name: "time-only".into(),
            config,
            train: TrainConfig {
                epochs: Some(25),
                learning_rate: Some(0.05),
                seed: 2,
                ..TrainConfig::default()
            },
        };
        let report = run_backtest(&frame, &model, &[Horizon::Unbounded], 2, 0.10, 0.05).unwrap();
        for r in &report.records {
            assert!(r.error.is_none(), "{:?}", r.error);
            assert!(r.mase.is_finite());
        }

        // an auto-regressive model cannot evaluate an unbounded horizon;
        // the fold records the error instead of failing the run
        let ar_model = BacktestModel::Configured {
            name: "ar".into(),
            config: ModelConfig {
                ar: Some(crate::model::config::ArConfig::linear(3)),
                ..ModelConfig::default()
            },
            train: TrainConfig::default(),
        };
        let report = run_backtest(&frame, &ar_model, &[Horizon::Unbounded], 2, 0.10, 0.05).unwrap();
        assert!(report.records.iter().all(|r| r.error.is_some()));
    }
}
