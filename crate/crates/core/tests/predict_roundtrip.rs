//! Prediction contracts: forecast-age columns, null patterns, component
//! additivity, and bit-exact serialization round trips.

use prismcast::data::{read_csv, write_forecast_csv, Frame};
use prismcast::model::config::{ArConfig, ModelConfig, SeasonalityChoice};
use prismcast::model::serialize::{from_json, to_json};
use prismcast::model::{fit, predict};
use prismcast::train::TrainConfig;

const DAY: i64 = 86_400;

fn wavy_frame(n: usize) -> Frame {
    let ts: Vec<i64> = (0..n as i64).map(|d| d * DAY).collect();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            5.0 + 0.02 * i as f64
                + (std::f64::consts::TAU * i as f64 / 7.0).sin()
                + 0.1 * ((i * 31 % 17) as f64 / 17.0)
        })
        .collect();
    Frame::from_raw(&ts, y, vec![]).unwrap()
}

fn ar_config(h: usize) -> ModelConfig {
    ModelConfig {
        horizon: h,
        ar: Some(ArConfig::linear(3)),
        ..ModelConfig::default()
    }
}

fn quick_train(seed: u64) -> TrainConfig {
    TrainConfig {
        epochs: Some(30),
        learning_rate: Some(0.05),
        seed,
        ..TrainConfig::default()
    }
}

#[test]
fn forecast_ages_and_null_pattern() {
    let n = 160;
    let frame = wavy_frame(n);
    let report = fit(&frame, &ar_config(3), &quick_train(4)).unwrap();

    // extend the frame with 3 future rows (unknown y)
    let mut timestamps = frame.timestamps.clone();
    let mut y = frame.y.clone();
    for i in 0..3 {
        timestamps.push((n as i64 + i) * DAY);
        y.push(f64::NAN);
    }
    let extended = Frame::from_raw(&timestamps, y, vec![]).unwrap();
    let fc = predict(&report.model, &extended).unwrap();
    assert_eq!(fc.horizon(), 3);
    assert_eq!(fc.len(), n + 3);

    // the first p rows have no forecast of any age
    for row in 0..3 {
        for age in &fc.yhat {
            assert!(age[row].is_none(), "row {row} should be empty");
        }
    }
    // a mid-series row carries every age
    for age in &fc.yhat {
        assert!(age[80].is_some());
    }
    // last future row: only the oldest forecast (origin at the final
    // observed lag window) can reach it
    let last = n + 2;
    assert!(fc.yhat[0][last].is_none());
    assert!(fc.yhat[1][last].is_none());
    assert!(fc.yhat[2][last].is_some());
    // one step past history: ages 1..=3 all reach it
    assert!(fc.yhat[0][n].is_some());
    assert!(fc.yhat[1][n].is_some());
    assert!(fc.yhat[2][n].is_some());
}

#[test]
fn component_columns_sum_to_yhat() {
    let frame = wavy_frame(140);
    let report = fit(&frame, &ar_config(2), &quick_train(9)).unwrap();
    let fc = predict(&report.model, &frame).unwrap();

    // per age: yhat = trend + seasonal + ar_age (no other modules here)
    for (i, age) in fc.yhat.iter().enumerate() {
        let ar_col = fc.component(&format!("ar{}", i + 1)).unwrap();
        let trend = fc.component("trend").unwrap();
        let weekly = fc.component("season_weekly").unwrap();
        for row in 0..fc.len() {
            let Some(yhat) = age[row] else { continue };
            let total = trend[row].unwrap() + weekly[row].unwrap() + ar_col[row].unwrap();
            assert!(
                (yhat - total).abs() < 1e-9,
                "row {row} age {}: {yhat} vs {total}",
                i + 1
            );
        }
    }
}

#[test]
fn serialize_round_trip_predicts_bit_exactly() {
    let frame = wavy_frame(120);
    let report = fit(&frame, &ar_config(2), &quick_train(11)).unwrap();
    let direct = predict(&report.model, &frame).unwrap();

    let json = to_json(&report.model);
    let loaded = from_json(&json).unwrap();
    assert_eq!(loaded, report.model);
    let via_file = predict(&loaded, &frame).unwrap();

    for (a, b) in direct.yhat.iter().zip(&via_file.yhat) {
        assert_eq!(a, b);
    }
    for (a, b) in direct.components.iter().zip(&via_file.components) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.values, b.values);
    }
}

#[test]
fn forecast_csv_parses_back_under_the_own_reader() {
    let frame = wavy_frame(100);
    let report = fit(&frame, &ar_config(1), &quick_train(2)).unwrap();
    let fc = predict(&report.model, &frame).unwrap();
    let dir = std::env::temp_dir().join("prismcast_roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fc.csv");
    write_forecast_csv(&fc, true, &path).unwrap();

    let back = read_csv(&path).unwrap();
    assert_eq!(back.len(), fc.len());
    assert_eq!(back.timestamps, fc.timestamps);
    let yhat1 = back.extra("yhat1").unwrap();
    for (row, v) in yhat1.iter().enumerate() {
        match fc.yhat[0][row] {
            Some(x) => assert_eq!(*v, x, "row {row}"),
            None => assert!(v.is_nan()),
        }
    }
    // trend column survives the trip exactly
    let trend = back.extra("trend").unwrap();
    for (row, v) in trend.iter().enumerate() {
        assert_eq!(Some(*v), fc.component("trend").unwrap()[row]);
    }
}

#[test]
fn forecasts_never_read_values_at_or_after_their_origin() {
    let n = 140;
    let frame = wavy_frame(n);
    let report = fit(&frame, &ar_config(3), &quick_train(8)).unwrap();

    // perturb everything from the origin onward; forecasts issued at that
    // origin must not change
    let origin = 100;
    let mut tampered = frame.clone();
    for v in tampered.y.iter_mut().skip(origin) {
        *v += 1000.0;
    }
    let ctx_a = prismcast::model::PredictionContext::new(&report.model, &frame).unwrap();
    let ctx_b = prismcast::model::PredictionContext::new(&report.model, &tampered).unwrap();
    let mut sa = ctx_a.scratch();
    let mut sb = ctx_b.scratch();
    let fa = ctx_a.forecast(origin, &mut sa);
    let fb = ctx_b.forecast(origin, &mut sb);
    assert_eq!(fa, fb, "lag inputs leaked values at or after the origin");
}

#[test]
fn time_only_model_forecasts_every_future_timestamp() {
    let n = 120;
    let frame = wavy_frame(n);
    let config = ModelConfig {
        seasonality: SeasonalityChoice::Auto,
        ..ModelConfig::default()
    };
    let report = fit(&frame, &config, &quick_train(5)).unwrap();

    // 100 future timestamps, no observed y at all
    let timestamps: Vec<i64> = (n as i64..n as i64 + 100).map(|d| d * DAY).collect();
    let y = vec![f64::NAN; 100];
    let future = Frame::from_raw(&timestamps, y, vec![]).unwrap();
    let fc = predict(&report.model, &future).unwrap();
    assert_eq!(fc.horizon(), 1);
    assert_eq!(fc.len(), 100);
    assert!(fc.yhat[0].iter().all(|v| v.is_some()));
}
