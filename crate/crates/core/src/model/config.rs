//! User-facing model configuration and its resolution against a dataset
//! into a fully specified model.

use crate::components::events::{country_holidays, date_to_epoch_days, EventSpec};
use crate::components::seasonality::{auto_configure_seasonality, SeasonalitySpec};
use crate::components::trend::{init_changepoints, validate_changepoints, FINAL_SEGMENT_FRACTION};
use crate::components::{ComponentMode, FutureRegressorSpec};
use crate::data::{Frame, NormMode, SECONDS_PER_DAY};
use crate::error::{Error, Result};
use crate::lagged::MlpSpec;
use chrono::{DateTime, Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

/// Trend section of the model configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendConfig {
    pub enabled: bool,
    pub n_changepoints: usize,
    /// Explicit normalized changepoint times; bypasses equidistant placement.
    pub changepoints: Option<Vec<f64>>,
    pub changepoint_reg: f64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            n_changepoints: 10,
            changepoints: None,
            changepoint_reg: 0.0,
        }
    }
}

/// How seasonality is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub enum SeasonalityChoice {
    /// Enable default periodicities based on data frequency and span.
    #[default]
    Auto,
    Off,
    Custom(Vec<SeasonalitySpec>),
}

/// Sparsity penalty selector for AR and lagged-regressor modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyKind {
    /// The log-transform penalty with `eps = 3`, `alpha = 1`.
    #[default]
    Default,
    /// The reference sigmoid-shaped alternative with `c1 = c2 = 3`.
    ArNet,
}

/// Auto-regression section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArConfig {
    pub n_lags: usize,
    pub hidden_layers: Vec<usize>,
    pub sparsity: f64,
    pub penalty: PenaltyKind,
}

impl ArConfig {
    pub fn linear(n_lags: usize) -> Self {
        Self {
            n_lags,
            hidden_layers: Vec::new(),
            sparsity: 0.0,
            penalty: PenaltyKind::Default,
        }
    }
}

/// One lagged-regressor module: a named covariate column with its own
/// AR-Net settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaggedRegressorConfig {
    pub name: String,
    pub n_lags: usize,
    pub hidden_layers: Vec<usize>,
    pub sparsity: f64,
    pub penalty: PenaltyKind,
}

/// One event: explicit dates or a country whose bundled holidays expand to
/// one event per holiday name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventConfig {
    pub name: String,
    pub dates: Vec<NaiveDate>,
    pub country: Option<String>,
    /// Window `[lower, upper]` in days around each occurrence.
    pub window: (i64, i64),
    pub mode: ComponentMode,
}

/// Declarative description of the model: enabled components, lags, horizon
/// and normalization. Unset training hyperparameters resolve by heuristics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub horizon: usize,
    pub normalization: NormMode,
    pub trend: TrendConfig,
    pub seasonality: SeasonalityChoice,
    pub events: Vec<EventConfig>,
    pub future_regressors: Vec<FutureRegressorSpec>,
    pub ar: Option<ArConfig>,
    pub lagged_regressors: Vec<LaggedRegressorConfig>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            horizon: 1,
            normalization: NormMode::Auto,
            trend: TrendConfig::default(),
            seasonality: SeasonalityChoice::Auto,
            events: Vec::new(),
            future_regressors: Vec::new(),
            ar: None,
            lagged_regressors: Vec::new(),
        }
    }
}

/// Affine map of the training time range onto `[0, 1]`; future timestamps
/// extrapolate beyond 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeScale {
    pub t_first: i64,
    pub t_last: i64,
}

impl TimeScale {
    pub fn t_norm(&self, ts: i64) -> f64 {
        if self.t_last == self.t_first {
            return 0.0;
        }
        (ts - self.t_first) as f64 / (self.t_last - self.t_first) as f64
    }

    pub fn span_seconds(&self) -> i64 {
        self.t_last - self.t_first
    }
}

/// Resolved trend: changepoints placed, regularization pinned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSpec {
    pub enabled: bool,
    pub changepoints: Vec<f64>,
    pub reg: f64,
}

/// Resolved AR-Net module settings shared by auto-regression and lagged
/// regressors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModuleSpec {
    pub spec: MlpSpec,
    pub sparsity: f64,
    pub penalty: PenaltyKind,
}

/// Fully resolved, data-dependent model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub horizon: usize,
    pub normalization: NormMode,
    pub trend: TrendSpec,
    pub seasonalities: Vec<SeasonalitySpec>,
    pub events: Vec<EventSpec>,
    pub future_regressors: Vec<FutureRegressorSpec>,
    pub ar: Option<ArModuleSpec>,
    pub lagged_regressors: Vec<(String, ArModuleSpec)>,
    pub time: TimeScale,
    pub freq: i64,
}

impl ModelSpec {
    /// Largest lag order over the AR and lagged-regressor modules.
    pub fn max_lags(&self) -> usize {
        let ar = self.ar.as_ref().map_or(0, |a| a.spec.p);
        let lagged = self
            .lagged_regressors
            .iter()
            .map(|(_, m)| m.spec.p)
            .max()
            .unwrap_or(0);
        ar.max(lagged)
    }

    pub fn uses_lags(&self) -> bool {
        self.ar.is_some() || !self.lagged_regressors.is_empty()
    }
}

/// Resolves a configuration against the dataset: places changepoints,
/// activates seasonalities, expands country holidays and checks that every
/// referenced column exists.
pub fn resolve(config: &ModelConfig, frame: &Frame) -> Result<ModelSpec> {
    if config.horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    let time = TimeScale {
        t_first: frame.timestamps[0],
        t_last: *frame.timestamps.last().expect("non-empty frame"),
    };

    let trend = TrendSpec {
        enabled: config.trend.enabled,
        changepoints: if !config.trend.enabled {
            Vec::new()
        } else if let Some(custom) = &config.trend.changepoints {
            validate_changepoints(custom)?
        } else {
            init_changepoints(config.trend.n_changepoints, FINAL_SEGMENT_FRACTION)
        },
        reg: config.trend.changepoint_reg,
    };

    let seasonalities = match &config.seasonality {
        SeasonalityChoice::Auto => auto_configure_seasonality(frame.freq, time.span_seconds()),
        SeasonalityChoice::Off => Vec::new(),
        SeasonalityChoice::Custom(list) => {
            for s in list {
                if s.fourier_order == 0 || s.period_days <= 0.0 {
                    return Err(Error::Config(format!(
                        "seasonality '{}' needs fourier_order >= 1 and period_days > 0",
                        s.name
                    )));
                }
            }
            list.clone()
        }
    };

    let events = resolve_events(&config.events, &time, config.horizon, frame.freq)?;

    for f in &config.future_regressors {
        if frame.extra(&f.name).is_none() {
            return Err(Error::Config(format!(
                "future regressor '{}' not found among data columns",
                f.name
            )));
        }
    }
    for l in &config.lagged_regressors {
        if frame.extra(&l.name).is_none() {
            return Err(Error::Config(format!(
                "lagged regressor '{}' not found among data columns",
                l.name
            )));
        }
        if l.n_lags == 0 {
            return Err(Error::Config(format!(
                "lagged regressor '{}' needs n_lags >= 1",
                l.name
            )));
        }
    }
    if let Some(ar) = &config.ar {
        if ar.n_lags == 0 {
            return Err(Error::Config("ar.n_lags must be at least 1".into()));
        }
    }

    Ok(ModelSpec {
        horizon: config.horizon,
        normalization: config.normalization,
        trend,
        seasonalities,
        events,
        future_regressors: config.future_regressors.clone(),
        ar: config.ar.as_ref().map(|a| ArModuleSpec {
            spec: MlpSpec {
                p: a.n_lags,
                h: config.horizon,
                hidden: a.hidden_layers.clone(),
            },
            sparsity: a.sparsity,
            penalty: a.penalty,
        }),
        lagged_regressors: config
            .lagged_regressors
            .iter()
            .map(|l| {
                (
                    l.name.clone(),
                    ArModuleSpec {
                        spec: MlpSpec {
                            p: l.n_lags,
                            h: config.horizon,
                            hidden: l.hidden_layers.clone(),
                        },
                        sparsity: l.sparsity,
                        penalty: l.penalty,
                    },
                )
            })
            .collect(),
        time,
        freq: frame.freq,
    })
}

fn resolve_events(
    configs: &[EventConfig],
    time: &TimeScale,
    horizon: usize,
    freq: i64,
) -> Result<Vec<EventSpec>> {
    let mut specs = Vec::new();
    // generous margin so holiday occurrences cover forecastable timestamps
    let end = time.t_last + horizon as i64 * freq + 366 * SECONDS_PER_DAY as i64;
    let start = time.t_first - 366 * SECONDS_PER_DAY as i64;
    let year_of = |secs: i64| DateTime::from_timestamp(secs, 0).map(|d| d.year());
    let (Some(year_from), Some(year_to)) = (year_of(start), year_of(end)) else {
        return Err(Error::InvalidTimestamps("timestamp out of range".into()));
    };
    for cfg in configs {
        if cfg.window.0 > 0 || cfg.window.1 < 0 {
            return Err(Error::Config(format!(
                "event '{}' window must satisfy lower <= 0 <= upper",
                cfg.name
            )));
        }
        if let Some(country) = &cfg.country {
            for (holiday, dates) in country_holidays(country, year_from, year_to)? {
                specs.push(EventSpec {
                    name: format!("{}: {}", country, holiday),
                    occurrence_days: dates.into_iter().map(date_to_epoch_days).collect(),
                    window_lower: cfg.window.0,
                    window_upper: cfg.window.1,
                    mode: cfg.mode,
                });
            }
        } else {
            if cfg.dates.is_empty() {
                return Err(Error::Config(format!(
                    "event '{}' has neither dates nor a country",
                    cfg.name
                )));
            }
            specs.push(EventSpec {
                name: cfg.name.clone(),
                occurrence_days: cfg.dates.iter().copied().map(date_to_epoch_days).collect(),
                window_lower: cfg.window.0,
                window_upper: cfg.window.1,
                mode: cfg.mode,
            });
        }
    }
    Ok(specs)
}
