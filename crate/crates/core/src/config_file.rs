//! Configuration file parsing: a key-value tree with `[model]`, `[trend]`,
//! `[seasonality.<name>]`, `[events.<name>]`, `[regressors.future.<name>]`,
//! `[regressors.lagged.<name>]`, `[ar]` and `[train]` sections.

use crate::components::seasonality::SeasonalitySpec;
use crate::components::{ComponentMode, FutureRegressorSpec};
use crate::data::NormMode;
use crate::error::{Error, Result};
use crate::model::config::{
    ArConfig, EventConfig, LaggedRegressorConfig, ModelConfig, PenaltyKind, SeasonalityChoice,
    TrendConfig,
};
use crate::train::{LossKind, OptimizerKind, TrainConfig};
use chrono::NaiveDate;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    model: ModelSection,
    #[serde(default)]
    trend: TrendSection,
    #[serde(default)]
    seasonality: BTreeMap<String, SeasonalitySection>,
    #[serde(default)]
    events: BTreeMap<String, EventSection>,
    #[serde(default)]
    regressors: RegressorsSection,
    #[serde(default)]
    ar: Option<ArSection>,
    #[serde(default)]
    train: TrainSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ModelSection {
    horizon: usize,
    normalization: String,
    /// "auto" or "off"; ignored when explicit seasonality sections exist.
    seasonality: String,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            horizon: 1,
            normalization: "auto".into(),
            seasonality: "auto".into(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TrendSection {
    enabled: bool,
    n_changepoints: usize,
    changepoints: Option<Vec<f64>>,
    changepoint_reg: f64,
}

impl Default for TrendSection {
    fn default() -> Self {
        let d = TrendConfig::default();
        Self {
            enabled: d.enabled,
            n_changepoints: d.n_changepoints,
            changepoints: d.changepoints,
            changepoint_reg: d.changepoint_reg,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeasonalitySection {
    period_days: f64,
    fourier_order: usize,
    #[serde(default = "additive")]
    mode: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventSection {
    #[serde(default)]
    dates: Vec<NaiveDate>,
    #[serde(default)]
    country: Option<String>,
    #[serde(default)]
    window: (i64, i64),
    #[serde(default = "additive")]
    mode: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegressorsSection {
    #[serde(default)]
    future: BTreeMap<String, FutureSection>,
    #[serde(default)]
    lagged: BTreeMap<String, LaggedSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FutureSection {
    #[serde(default = "additive")]
    mode: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaggedSection {
    n_lags: usize,
    #[serde(default)]
    hidden_layers: Vec<usize>,
    #[serde(default)]
    sparsity: f64,
    #[serde(default = "default_penalty")]
    penalty: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArSection {
    n_lags: usize,
    #[serde(default)]
    hidden_layers: Vec<usize>,
    #[serde(default)]
    sparsity: f64,
    #[serde(default = "default_penalty")]
    penalty: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TrainSection {
    loss: String,
    huber_beta: f64,
    optimizer: String,
    learning_rate: Option<f64>,
    batch_size: Option<usize>,
    epochs: Option<usize>,
    reg_ramp_start: f64,
    seed: u64,
}

impl Default for TrainSection {
    fn default() -> Self {
        let d = TrainConfig::default();
        Self {
            loss: "huber".into(),
            huber_beta: d.huber_beta,
            optimizer: "adamw".into(),
            learning_rate: d.learning_rate,
            batch_size: d.batch_size,
            epochs: d.epochs,
            reg_ramp_start: d.reg_ramp_start,
            seed: d.seed,
        }
    }
}

fn additive() -> String {
    "additive".into()
}

fn default_penalty() -> String {
    "default".into()
}

fn parse_penalty(s: &str) -> Result<PenaltyKind> {
    match s {
        "default" => Ok(PenaltyKind::Default),
        "arnet" => Ok(PenaltyKind::ArNet),
        other => Err(Error::Config(format!(
            "unknown penalty '{other}' (expected default or arnet)"
        ))),
    }
}

/// Parses a configuration document into model and training configs.
pub fn parse_config(text: &str) -> Result<(ModelConfig, TrainConfig)> {
    let file: FileConfig =
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;

    let seasonality = if !file.seasonality.is_empty() {
        SeasonalityChoice::Custom(
            file.seasonality
                .into_iter()
                .map(|(name, s)| {
                    Ok(SeasonalitySpec {
                        name,
                        period_days: s.period_days,
                        fourier_order: s.fourier_order,
                        mode: ComponentMode::parse(&s.mode)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        match file.model.seasonality.as_str() {
            "auto" => SeasonalityChoice::Auto,
            "off" => SeasonalityChoice::Off,
            other => {
                return Err(Error::Config(format!(
                    "model.seasonality must be 'auto' or 'off', got '{other}'"
                )))
            }
        }
    };

    let model = ModelConfig {
        horizon: file.model.horizon,
        normalization: NormMode::parse(&file.model.normalization)?,
        trend: TrendConfig {
            enabled: file.trend.enabled,
            n_changepoints: file.trend.n_changepoints,
            changepoints: file.trend.changepoints,
            changepoint_reg: file.trend.changepoint_reg,
        },
        seasonality,
        events: file
            .events
            .into_iter()
            .map(|(name, e)| {
                Ok(EventConfig {
                    name,
                    dates: e.dates,
                    country: e.country,
                    window: e.window,
                    mode: ComponentMode::parse(&e.mode)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        future_regressors: file
            .regressors
            .future
            .into_iter()
            .map(|(name, f)| {
                Ok(FutureRegressorSpec {
                    name,
                    mode: ComponentMode::parse(&f.mode)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        ar: file
            .ar
            .map(|a| {
                Ok::<_, Error>(ArConfig {
                    n_lags: a.n_lags,
                    hidden_layers: a.hidden_layers,
                    sparsity: a.sparsity,
                    penalty: parse_penalty(&a.penalty)?,
                })
            })
            .transpose()?,
        lagged_regressors: file
            .regressors
            .lagged
            .into_iter()
            .map(|(name, l)| {
                Ok(LaggedRegressorConfig {
                    name,
                    n_lags: l.n_lags,
                    hidden_layers: l.hidden_layers,
                    sparsity: l.sparsity,
                    penalty: parse_penalty(&l.penalty)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };

    let train = TrainConfig {
        loss: LossKind::parse(&file.train.loss)?,
        huber_beta: file.train.huber_beta,
        optimizer: OptimizerKind::parse(&file.train.optimizer)?,
        learning_rate: file.train.learning_rate,
        batch_size: file.train.batch_size,
        epochs: file.train.epochs,
        reg_ramp_start: file.train.reg_ramp_start,
        seed: file.train.seed,
    };
    train.validate()?;
    Ok((model, train))
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<(ModelConfig, TrainConfig)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}
