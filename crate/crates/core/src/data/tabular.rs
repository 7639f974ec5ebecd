//! Tabularization: per-timestamp feature precomputation plus the set of
//! valid forecast origins with full lag and target windows.

use super::SECONDS_PER_DAY;
use crate::components::events::{event_features, EventMatrix};
use crate::components::seasonality::fourier_features;
use crate::error::{Error, Result};
use crate::model::config::ModelSpec;

/// Precomputed Fourier features for one seasonality: `2k` values per
/// timestamp, row-major.
#[derive(Debug, Clone)]
pub struct SeasonalBlock {
    pub width: usize,
    pub data: Vec<f64>,
}

impl SeasonalBlock {
    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.width..(t + 1) * self.width]
    }
}

/// Per-timestamp inputs to every time-based component.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    /// Normalized trend time per timestamp.
    pub t_norm: Vec<f64>,
    /// One block per configured seasonality.
    pub seasonal: Vec<SeasonalBlock>,
    /// Expanded binary event columns.
    pub events: EventMatrix,
    /// Normalized values per future regressor.
    pub future: Vec<Vec<f64>>,
}

/// Builds the design matrix for arbitrary timestamps (training or
/// prediction range) under a resolved model.
pub fn design_matrix(
    timestamps: &[i64],
    spec: &ModelSpec,
    future_values: Vec<Vec<f64>>,
) -> DesignMatrix {
    debug_assert_eq!(future_values.len(), spec.future_regressors.len());
    let t_norm = timestamps.iter().map(|&ts| spec.time.t_norm(ts)).collect();
    let seasonal = spec
        .seasonalities
        .iter()
        .map(|s| {
            let width = s.coeff_count();
            let mut data = vec![0.0; timestamps.len() * width];
            for (row, &ts) in timestamps.iter().enumerate() {
                let t_days = ts as f64 / SECONDS_PER_DAY;
                fourier_features(
                    t_days,
                    s.period_days,
                    s.fourier_order,
                    &mut data[row * width..(row + 1) * width],
                );
            }
            SeasonalBlock { width, data }
        })
        .collect();
    let events = event_features(timestamps, &spec.events);
    DesignMatrix {
        t_norm,
        seasonal,
        events,
        future: future_values,
    }
}

/// One sample per valid forecast origin over a normalized dataset.
#[derive(Debug, Clone)]
pub struct SampleSet {
    /// Valid origin indices into the timestamp grid.
    pub origins: Vec<usize>,
    pub h: usize,
    /// Normalized target series (may contain NaN at skipped positions).
    pub y: Vec<f64>,
    /// Normalized covariate series, one per configured lagged regressor.
    pub covariates: Vec<Vec<f64>>,
    pub design: DesignMatrix,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }
}

/// Collects every origin whose lag windows (target and covariates) and
/// target window are fully inside the observed range with no missing
/// values. With lags enabled the first `p` timestamps produce no sample
/// and the last `h - 1` no complete target.
pub fn tabularize(
    spec: &ModelSpec,
    design: DesignMatrix,
    y: Vec<f64>,
    covariates: Vec<Vec<f64>>,
) -> Result<SampleSet> {
    let n = y.len();
    let h = spec.horizon;
    let p_max = spec.max_lags();
    if n < p_max + h {
        return Err(Error::InsufficientData {
            required: p_max + h,
            actual: n,
        });
    }
    let ar_p = spec.ar.as_ref().map(|a| a.spec.p);
    let lag_orders: Vec<usize> = spec
        .lagged_regressors
        .iter()
        .map(|(_, m)| m.spec.p)
        .collect();
    debug_assert_eq!(covariates.len(), lag_orders.len());

    let mut origins = Vec::with_capacity(n - p_max - h + 1);
    'origin: for o in p_max..=n - h {
        for t in o..o + h {
            if y[t].is_nan() {
                continue 'origin;
            }
            for f in &design.future {
                if f[t].is_nan() {
                    continue 'origin;
                }
            }
        }
        if let Some(p) = ar_p {
            for t in o - p..o {
                if y[t].is_nan() {
                    continue 'origin;
                }
            }
        }
        for (series, &p) in covariates.iter().zip(&lag_orders) {
            for t in o - p..o {
                if series[t].is_nan() {
                    continue 'origin;
                }
            }
        }
        origins.push(o);
    }
    if origins.is_empty() {
        return Err(Error::InsufficientData {
            required: p_max + h,
            actual: 0,
        });
    }
    Ok(SampleSet {
        origins,
        h,
        y,
        covariates,
        design,
    })
}
