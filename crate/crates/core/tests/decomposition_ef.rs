//! End-to-end recovery of event and future-regressor effects: generate the
//! events + future-regressor scenario, declare the event by its dates and
//! the regressor by its column, fit, and compare decomposed components to
//! ground truth.

#![allow(clippy::needless_range_loop)]

use chrono::{Duration, NaiveDate};
use prismcast::components::{ComponentMode, FutureRegressorSpec};
use prismcast::data::Frame;
use prismcast::model::config::{EventConfig, ModelConfig, SeasonalityChoice};
use prismcast::model::{fit, predict};
use prismcast::synth::{
    compose_scenario, score_decomposition, ComponentKind, ScenarioId, SynthScenario,
};
use prismcast::train::TrainConfig;

#[test]
fn event_and_future_regressor_effects_recovered() {
    let scenario = SynthScenario {
        length: 3000,
        count: 1,
        ..SynthScenario::new(ScenarioId::SEf, 11)
    };
    let series = compose_scenario(&scenario, 0).unwrap();

    let frame = Frame::from_raw(
        &series.timestamps,
        series.y.clone(),
        vec![("freg".into(), series.future_input.clone().unwrap())],
    )
    .unwrap();

    // event occurrences as calendar dates (daily grid from 2000-01-01)
    let epoch = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
    let dates: Vec<NaiveDate> = series
        .event_positions
        .iter()
        .map(|&p| epoch + Duration::days(p as i64))
        .collect();

    let config = ModelConfig {
        seasonality: SeasonalityChoice::Off,
        events: vec![EventConfig {
            name: "pulse".into(),
            dates,
            country: None,
            window: (0, 0),
            mode: ComponentMode::Additive,
        }],
        future_regressors: vec![FutureRegressorSpec {
            name: "freg".into(),
            mode: ComponentMode::Additive,
        }],
        ..ModelConfig::default()
    };
    let train = TrainConfig {
        seed: 6,
        ..TrainConfig::default()
    };
    let report = fit(&frame, &config, &train).unwrap();
    let fc = predict(&report.model, &frame).unwrap();

    let column = |name: &str| -> Vec<f64> {
        fc.component(name)
            .unwrap()
            .iter()
            .map(|v| v.unwrap())
            .collect()
    };
    let tolerance = 2.0 * scenario.noise_sigma;
    let event_rmse = score_decomposition(
        series.truth(ComponentKind::Event).unwrap(),
        &column("event_pulse"),
    )
    .unwrap();
    let freg_rmse = score_decomposition(
        series.truth(ComponentKind::FutureRegressor).unwrap(),
        &column("future_freg"),
    )
    .unwrap();
    assert!(event_rmse <= tolerance, "event rmse {event_rmse}");
    assert!(freg_rmse <= tolerance, "future regressor rmse {freg_rmse}");
}

/// Linear lagged-regressor weights recover the generating combination
/// within +-0.05 and agree with a least-squares oracle within +-0.01.
#[test]
fn lagged_regressor_weights_recover_generating_coefficients() {
    use prismcast::model::config::{LaggedRegressorConfig, TrendConfig};
    use rand::{RngExt, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    let n = 6000;
    let (x, effect, c) = prismcast::synth::gen_lagged_effect(n, &mut rng).unwrap();
    let y: Vec<f64> = effect
        .iter()
        .map(|v| {
            v + 0.1 * {
                // Box-Muller on the shared rng keeps the test deterministic
                let u1: f64 = rng.random_range(1e-12..1.0);
                let u2: f64 = rng.random_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            }
        })
        .collect();
    let ts: Vec<i64> = (0..n as i64).map(|d| d * 86_400).collect();
    let frame = Frame::from_raw(&ts, y.clone(), vec![("x".into(), x.clone())]).unwrap();

    let config = ModelConfig {
        trend: TrendConfig {
            enabled: false,
            ..Default::default()
        },
        seasonality: SeasonalityChoice::Off,
        lagged_regressors: vec![LaggedRegressorConfig {
            name: "x".into(),
            n_lags: 3,
            hidden_layers: vec![],
            sparsity: 0.0,
            penalty: Default::default(),
        }],
        ..ModelConfig::default()
    };
    let report = fit(&frame, &config, &TrainConfig::default()).unwrap();
    let net = report.model.lagged_net("x").unwrap();
    let w = &net.params[..3];

    // the fit works in normalized space: w_i = c_i * scale_x / scale_y
    let scale_y = report.model.y_state.scale;
    let scale_x = report.model.covariate_states[0].scale;
    let rescaled: Vec<f64> = w.iter().map(|wi| wi * scale_y / scale_x).collect();
    for (i, (&got, want)) in rescaled.iter().zip(&c).enumerate() {
        assert!(
            (got - want).abs() < 0.05,
            "lag {}: recovered {got:.4} vs generated {want:.4}",
            i + 1
        );
    }

    // least-squares oracle on the raw lag matrix (with intercept)
    let design: Vec<Vec<f64>> = (3..n)
        .map(|t| vec![1.0, x[t - 1], x[t - 2], x[t - 3]])
        .collect();
    let target: Vec<f64> = y[3..].to_vec();
    let beta = ols(&design, &target);
    for i in 0..3 {
        assert!(
            (rescaled[i] - beta[i + 1]).abs() < 0.01,
            "lag {}: fitted {:.4} vs ols {:.4}",
            i + 1,
            rescaled[i],
            beta[i + 1]
        );
    }
}

/// Least squares via Gaussian elimination on the normal equations.
fn ols(design: &[Vec<f64>], target: &[f64]) -> Vec<f64> {
    let k = design[0].len();
    let mut ata = vec![vec![0.0; k + 1]; k];
    for (row, &t) in design.iter().zip(target) {
        for i in 0..k {
            for j in 0..k {
                ata[i][j] += row[i] * row[j];
            }
            ata[i][k] += row[i] * t;
        }
    }
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| ata[a][col].abs().partial_cmp(&ata[b][col].abs()).unwrap())
            .unwrap();
        ata.swap(col, pivot);
        for row in col + 1..k {
            let f = ata[row][col] / ata[col][col];
            for j in col..=k {
                ata[row][j] -= f * ata[col][j];
            }
        }
    }
    let mut beta = vec![0.0; k];
    for row in (0..k).rev() {
        let mut v = ata[row][k];
        for j in row + 1..k {
            v -= ata[row][j] * beta[j];
        }
        beta[row] = v / ata[row][row];
    }
    beta
}
