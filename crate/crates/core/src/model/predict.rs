//! Prediction: forecast frames with per-age predictions and per-component
//! contributions.
//!
//! A forecast issued at origin `o` covers timestamps `o .. o+h-1`. In the
//! output frame, `yhat3` at a row is the prediction for that row made with
//! data available three steps earlier; `ar2` is the AR effect predicted
//! two steps earlier. Time-based component columns depend only on the row.

use super::config::ModelSpec;
use super::network::{Network, Scratch};
use super::FittedModel;
use crate::data::{design_matrix, impute_slice, DesignMatrix, Frame};
use crate::error::{Error, Result};

/// Per-timestamp predictions by forecast age plus the decomposition.
#[derive(Debug, Clone)]
pub struct ForecastFrame {
    pub timestamps: Vec<i64>,
    /// Observed values where known.
    pub actual: Vec<Option<f64>>,
    /// `yhat[i]` is the age-`i+1` prediction column.
    pub yhat: Vec<Vec<Option<f64>>>,
    /// Component columns in presentation order.
    pub components: Vec<ComponentColumn>,
}

#[derive(Debug, Clone)]
pub struct ComponentColumn {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

impl ForecastFrame {
    pub fn horizon(&self) -> usize {
        self.yhat.len()
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn component(&self, name: &str) -> Option<&[Option<f64>]> {
        self.components
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }
}

/// A frame prepared for forecasting: design matrix over the requested
/// timestamps plus normalized lag inputs.
pub struct PredictionContext<'a> {
    model: &'a FittedModel,
    net: Network<'a>,
    design: DesignMatrix,
    y_norm: Vec<f64>,
    covariates: Vec<Vec<f64>>,
    n: usize,
}

impl<'a> PredictionContext<'a> {
    /// Builds the context over the frame's timestamps. Future-regressor
    /// columns must provide a value for every requested timestamp.
    pub fn new(model: &'a FittedModel, frame: &Frame) -> Result<Self> {
        let spec = &model.spec;
        let mut futures = Vec::new();
        for (f, state) in spec.future_regressors.iter().zip(&model.future_states) {
            let raw = frame.extra(&f.name).ok_or_else(|| {
                Error::Config(format!(
                    "future regressor '{}' not found among data columns",
                    f.name
                ))
            })?;
            let filled = impute_slice(
                raw,
                crate::data::DEFAULT_LINEAR_LIMIT,
                crate::data::DEFAULT_ROLLING_LIMIT,
                crate::data::DEFAULT_ROLLING_WINDOW,
            )
            .unwrap_or_else(|_| raw.to_vec());
            if let Some(row) = filled.iter().position(|v| v.is_nan()) {
                return Err(Error::MissingFutureRegressor {
                    name: f.name.clone(),
                    row,
                });
            }
            futures.push(filled.iter().map(|&v| state.apply(v)).collect());
        }

        let mut y_norm: Vec<f64> = frame.y.iter().map(|&v| model.y_state.apply(v)).collect();
        if spec.ar.is_some() {
            if let Ok(filled) = impute_slice(
                &frame.y,
                crate::data::DEFAULT_LINEAR_LIMIT,
                crate::data::DEFAULT_ROLLING_LIMIT,
                crate::data::DEFAULT_ROLLING_WINDOW,
            ) {
                y_norm = filled.iter().map(|&v| model.y_state.apply(v)).collect();
            }
        }

        let mut covariates = Vec::new();
        for ((name, _), state) in spec.lagged_regressors.iter().zip(&model.covariate_states) {
            let raw = frame.extra(name).ok_or_else(|| {
                Error::Config(format!(
                    "lagged regressor '{name}' not found among data columns"
                ))
            })?;
            let filled = impute_slice(
                raw,
                crate::data::DEFAULT_LINEAR_LIMIT,
                crate::data::DEFAULT_ROLLING_LIMIT,
                crate::data::DEFAULT_ROLLING_WINDOW,
            )
            .unwrap_or_else(|_| raw.to_vec());
            covariates.push(filled.iter().map(|&v| state.apply(v)).collect());
        }

        let design = design_matrix(&frame.timestamps, spec, futures);
        Ok(Self {
            model,
            net: Network::new(spec, &model.layout),
            design,
            y_norm,
            covariates,
            n: frame.len(),
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.model.spec
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn scratch(&self) -> Scratch {
        self.net.scratch()
    }

    /// Whether a forecast can be issued at `origin`: the target window
    /// fits in the frame and every lag input is observed.
    pub fn origin_valid(&self, origin: usize) -> bool {
        let spec = &self.model.spec;
        if origin + spec.horizon > self.n {
            return false;
        }
        if let Some(ar) = &spec.ar {
            if origin < ar.spec.p {
                return false;
            }
            if self.y_norm[origin - ar.spec.p..origin]
                .iter()
                .any(|v| v.is_nan())
            {
                return false;
            }
        }
        for ((_, m), series) in spec.lagged_regressors.iter().zip(&self.covariates) {
            if origin < m.spec.p {
                return false;
            }
            if series[origin - m.spec.p..origin].iter().any(|v| v.is_nan()) {
                return false;
            }
        }
        true
    }

    /// Normalized `h`-step forecast issued at `origin` (left in
    /// `scratch.yhat`).
    pub fn forecast_normalized(&self, origin: usize, scratch: &mut Scratch) {
        self.net.forward(
            &self.model.params,
            &self.design,
            &self.y_norm,
            &self.covariates,
            origin,
            scratch,
        );
    }

    /// Denormalized `h`-step forecast issued at `origin`.
    pub fn forecast(&self, origin: usize, scratch: &mut Scratch) -> Vec<f64> {
        self.forecast_normalized(origin, scratch);
        scratch
            .yhat
            .iter()
            .map(|&z| self.model.y_state.invert(z))
            .collect()
    }

    /// Denormalized time-only prediction at a single row.
    pub fn time_only_value(&self, row: usize) -> f64 {
        let z = self
            .net
            .time_only_value(&self.model.params, &self.design, row);
        self.model.y_state.invert(z)
    }

    fn decompose(
        &self,
        origin: usize,
        scratch: &mut Scratch,
    ) -> Vec<super::network::StepDecomposition> {
        self.net.decompose(
            &self.model.params,
            &self.design,
            &self.y_norm,
            &self.covariates,
            origin,
            scratch,
        )
    }

    /// Normalized time-based component contributions at one row:
    /// `(trend, seasonal, events, future)`.
    pub fn decompose_row(&self, row: usize) -> RowComponents {
        let (trend, seasonal, events, future) =
            self.net
                .time_decompose(&self.model.params, &self.design, row);
        RowComponents {
            trend,
            seasonal,
            events,
            future,
        }
    }
}

/// Time-based component contributions at a single row, normalized space.
#[derive(Debug, Clone)]
pub struct RowComponents {
    pub trend: f64,
    pub seasonal: Vec<f64>,
    pub events: Vec<f64>,
    pub future: Vec<f64>,
}

/// Builds the full forecast frame over the frame's timestamps: per-age
/// predictions plus per-component contribution columns. Component columns
/// sum to the matching `yhat` column; cells with no age-`i` forecast hold
/// an explicit null.
pub fn predict(model: &FittedModel, frame: &Frame) -> Result<ForecastFrame> {
    let ctx = PredictionContext::new(model, frame)?;
    let spec = &model.spec;
    let h = spec.horizon;
    let n = ctx.n_rows();
    let scale = model.y_state.scale;
    let shift = model.y_state.shift;

    let mut yhat = vec![vec![None; n]; h];
    let mut ar_cols = vec![vec![None; n]; if spec.ar.is_some() { h } else { 0 }];
    let mut lagged_cols: Vec<Vec<Vec<Option<f64>>>> = spec
        .lagged_regressors
        .iter()
        .map(|_| vec![vec![None; n]; h])
        .collect();

    // time-based components depend only on the row
    let mut trend_col = Vec::with_capacity(n);
    let mut seasonal_cols = vec![Vec::with_capacity(n); spec.seasonalities.len()];
    let mut event_cols = vec![Vec::with_capacity(n); spec.events.len()];
    let mut future_cols = vec![Vec::with_capacity(n); spec.future_regressors.len()];
    let mut scratch = ctx.scratch();
    for t in 0..n {
        let d = &ctx.decompose_row(t);
        trend_col.push(Some(shift + scale * d.trend));
        for (c, v) in seasonal_cols.iter_mut().zip(&d.seasonal) {
            c.push(Some(scale * v));
        }
        for (c, v) in event_cols.iter_mut().zip(&d.events) {
            c.push(Some(scale * v));
        }
        for (c, v) in future_cols.iter_mut().zip(&d.future) {
            c.push(Some(scale * v));
        }
    }

    for origin in 0..n {
        if !ctx.origin_valid(origin) {
            continue;
        }
        let steps = ctx.decompose(origin, &mut scratch);
        for (i, step) in steps.iter().enumerate() {
            let row = origin + i;
            yhat[i][row] = Some(shift + scale * step.yhat);
            if !ar_cols.is_empty() {
                ar_cols[i][row] = Some(scale * step.ar);
            }
            for (k, v) in step.lagged.iter().enumerate() {
                lagged_cols[k][i][row] = Some(scale * v);
            }
        }
    }

    let mut components = vec![ComponentColumn {
        name: "trend".into(),
        values: trend_col,
    }];
    for (s, values) in spec.seasonalities.iter().zip(seasonal_cols) {
        components.push(ComponentColumn {
            name: format!("season_{}", s.name),
            values,
        });
    }
    for (e, values) in spec.events.iter().zip(event_cols) {
        components.push(ComponentColumn {
            name: format!("event_{}", e.name),
            values,
        });
    }
    for (f, values) in spec.future_regressors.iter().zip(future_cols) {
        components.push(ComponentColumn {
            name: format!("future_{}", f.name),
            values,
        });
    }
    for (i, values) in ar_cols.into_iter().enumerate() {
        components.push(ComponentColumn {
            name: format!("ar{}", i + 1),
            values,
        });
    }
    for ((name, _), cols) in spec.lagged_regressors.iter().zip(lagged_cols) {
        for (i, values) in cols.into_iter().enumerate() {
            components.push(ComponentColumn {
                name: format!("lagged_{}{}", name, i + 1),
                values,
            });
        }
    }

    Ok(ForecastFrame {
        timestamps: frame.timestamps.clone(),
        actual: frame
            .y
            .iter()
            .map(|&v| if v.is_nan() { None } else { Some(v) })
            .collect(),
        yhat,
        components,
    })
}
