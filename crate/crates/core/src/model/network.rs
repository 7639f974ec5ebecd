//! Forward and backward passes of the composed model over a tabularized
//! dataset. All modules produce `h` outputs per forecast origin which sum
//! into the prediction; multiplicative components are scaled by the trend
//! value at the same timestamp before summation.

use super::config::ModelSpec;
use super::params::ParamLayout;
use crate::components::seasonality::dot;
use crate::components::trend::trend_value;
use crate::components::ComponentMode;
use crate::data::DesignMatrix;
use crate::lagged::{mlp_backward, mlp_forward, MlpScratch};

/// Stateless view pairing a resolved spec with its parameter layout.
pub struct Network<'a> {
    pub spec: &'a ModelSpec,
    pub layout: &'a ParamLayout,
    event_col_modes: Vec<ComponentMode>,
}

/// Reusable buffers for one sample's forward/backward pass.
pub struct Scratch {
    pub yhat: Vec<f64>,
    trend_vals: Vec<f64>,
    mult_sums: Vec<f64>,
    ar: Option<MlpScratch>,
    ar_lags: Vec<f64>,
    lagged: Vec<MlpScratch>,
    lagged_lags: Vec<Vec<f64>>,
    grad_out: Vec<f64>,
}

/// Per-step component contributions in normalized space, multiplicative
/// scaling already applied.
#[derive(Debug, Clone)]
pub struct StepDecomposition {
    pub trend: f64,
    pub seasonal: Vec<f64>,
    pub events: Vec<f64>,
    pub future: Vec<f64>,
    pub ar: f64,
    pub lagged: Vec<f64>,
    pub yhat: f64,
}

impl<'a> Network<'a> {
    pub fn new(spec: &'a ModelSpec, layout: &'a ParamLayout) -> Self {
        let event_col_modes = spec
            .events
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.mode, e.column_count()))
            .collect();
        Self {
            spec,
            layout,
            event_col_modes,
        }
    }

    pub fn scratch(&self) -> Scratch {
        let h = self.spec.horizon;
        Scratch {
            yhat: vec![0.0; h],
            trend_vals: vec![0.0; h],
            mult_sums: vec![0.0; h],
            ar: self.spec.ar.as_ref().map(|a| MlpScratch::for_spec(&a.spec)),
            ar_lags: vec![0.0; self.spec.ar.as_ref().map_or(0, |a| a.spec.p)],
            lagged: self
                .spec
                .lagged_regressors
                .iter()
                .map(|(_, m)| MlpScratch::for_spec(&m.spec))
                .collect(),
            lagged_lags: self
                .spec
                .lagged_regressors
                .iter()
                .map(|(_, m)| vec![0.0; m.spec.p])
                .collect(),
            grad_out: vec![0.0; h],
        }
    }

    /// Trend value at design row `t` (the constant offset when growth is
    /// disabled).
    pub fn trend_at(&self, params: &[f64], design: &DesignMatrix, t: usize) -> f64 {
        let rho0 = params[self.layout.rho0];
        match &self.layout.growth {
            Some(g) => trend_value(
                design.t_norm[t],
                params[g.delta0],
                rho0,
                &self.spec.trend.changepoints,
                &params[g.deltas.clone()],
            ),
            None => rho0,
        }
    }

    /// Time-based components at design row `t`: `(trend, seasonal per
    /// periodicity, events aggregated per event, future per regressor,
    /// additive sum, multiplicative sum)`. Component values are raw, not
    /// yet trend-scaled; the sums separate them by mode.
    fn time_features(
        &self,
        params: &[f64],
        design: &DesignMatrix,
        t: usize,
    ) -> (f64, Vec<f64>, Vec<f64>, Vec<f64>, f64, f64) {
        let trend = self.trend_at(params, design, t);
        let mut add = 0.0;
        let mut mult = 0.0;
        let mut seasonal = Vec::with_capacity(self.spec.seasonalities.len());
        for (idx, (s, range)) in self
            .spec
            .seasonalities
            .iter()
            .zip(&self.layout.seasonal)
            .enumerate()
        {
            let v = dot(design.seasonal[idx].row(t), &params[range.clone()]);
            match s.mode {
                ComponentMode::Additive => add += v,
                ComponentMode::Multiplicative => mult += v,
            }
            seasonal.push(v);
        }
        let mut events = vec![0.0; self.spec.events.len()];
        if design.events.width() > 0 {
            let row = design.events.row(t);
            let weights = &params[self.layout.events.clone()];
            for (c, col) in design.events.columns.iter().enumerate() {
                let v = weights[c] * row[c];
                match self.event_col_modes[c] {
                    ComponentMode::Additive => add += v,
                    ComponentMode::Multiplicative => mult += v,
                }
                events[col.event_index] += v;
            }
        }
        let mut future = Vec::with_capacity(self.spec.future_regressors.len());
        for (f, spec) in self.spec.future_regressors.iter().enumerate() {
            let coeff = params[self.layout.future.start + f];
            let v = coeff * design.future[f][t];
            match spec.mode {
                ComponentMode::Additive => add += v,
                ComponentMode::Multiplicative => mult += v,
            }
            future.push(v);
        }
        (trend, seasonal, events, future, add, mult)
    }

    /// Prediction from time-based components alone at design row `t`.
    pub fn time_only_value(&self, params: &[f64], design: &DesignMatrix, t: usize) -> f64 {
        let (trend, _, _, _, add, mult) = self.time_features(params, design, t);
        crate::components::compose(trend, add, mult)
    }

    /// Time-based component contributions at design row `t`, with
    /// multiplicative scaling applied: `(trend, seasonal, events, future)`.
    pub fn time_decompose(
        &self,
        params: &[f64],
        design: &DesignMatrix,
        t: usize,
    ) -> (f64, Vec<f64>, Vec<f64>, Vec<f64>) {
        let (trend, seasonal, events, future, _, _) = self.time_features(params, design, t);
        let scale = |mode: ComponentMode, v: f64| match mode {
            ComponentMode::Additive => v,
            ComponentMode::Multiplicative => trend * v,
        };
        (
            trend,
            self.spec
                .seasonalities
                .iter()
                .zip(seasonal)
                .map(|(s, v)| scale(s.mode, v))
                .collect(),
            self.spec
                .events
                .iter()
                .zip(events)
                .map(|(e, v)| scale(e.mode, v))
                .collect(),
            self.spec
                .future_regressors
                .iter()
                .zip(future)
                .map(|(f, v)| scale(f.mode, v))
                .collect(),
        )
    }

    fn fill_lags(&self, y: &[f64], covariates: &[Vec<f64>], origin: usize, scratch: &mut Scratch) {
        if let Some(ar) = &self.spec.ar {
            for j in 0..ar.spec.p {
                scratch.ar_lags[j] = y[origin - 1 - j];
            }
        }
        for k in 0..covariates.len() {
            let p = self.spec.lagged_regressors[k].1.spec.p;
            for j in 0..p {
                scratch.lagged_lags[k][j] = covariates[k][origin - 1 - j];
            }
        }
    }

    /// Full forward pass for the sample at `origin`; `scratch.yhat`
    /// receives the `h` normalized predictions.
    pub fn forward(
        &self,
        params: &[f64],
        design: &DesignMatrix,
        y: &[f64],
        covariates: &[Vec<f64>],
        origin: usize,
        scratch: &mut Scratch,
    ) {
        self.fill_lags(y, covariates, origin, scratch);
        if let Some(ar_layout) = &self.layout.ar {
            let s = scratch.ar.as_mut().expect("ar scratch allocated");
            mlp_forward(ar_layout, params, &scratch.ar_lags, s);
        }
        for (k, layout) in self.layout.lagged.iter().enumerate() {
            mlp_forward(
                layout,
                params,
                &scratch.lagged_lags[k],
                &mut scratch.lagged[k],
            );
        }
        for i in 0..self.spec.horizon {
            let t = origin + i;
            let (trend, _, _, _, add, mult) = self.time_features(params, design, t);
            let ar_v = scratch.ar.as_ref().map_or(0.0, |s| s.output[i]);
            let lag_v: f64 = scratch.lagged.iter().map(|s| s.output[i]).sum();
            scratch.trend_vals[i] = trend;
            scratch.mult_sums[i] = mult;
            scratch.yhat[i] = crate::components::compose(trend, add, mult) + ar_v + lag_v;
        }
    }

    /// Forward pass with the per-component breakdown, used for prediction
    /// and decomposition output.
    pub fn decompose(
        &self,
        params: &[f64],
        design: &DesignMatrix,
        y: &[f64],
        covariates: &[Vec<f64>],
        origin: usize,
        scratch: &mut Scratch,
    ) -> Vec<StepDecomposition> {
        self.forward(params, design, y, covariates, origin, scratch);
        (0..self.spec.horizon)
            .map(|i| {
                let t = origin + i;
                let (trend, seasonal, events, future, _, _) = self.time_features(params, design, t);
                let scale = |mode: ComponentMode, v: f64| match mode {
                    ComponentMode::Additive => v,
                    ComponentMode::Multiplicative => trend * v,
                };
                StepDecomposition {
                    trend,
                    seasonal: self
                        .spec
                        .seasonalities
                        .iter()
                        .zip(&seasonal)
                        .map(|(s, &v)| scale(s.mode, v))
                        .collect(),
                    events: self
                        .spec
                        .events
                        .iter()
                        .zip(&events)
                        .map(|(e, &v)| scale(e.mode, v))
                        .collect(),
                    future: self
                        .spec
                        .future_regressors
                        .iter()
                        .zip(&future)
                        .map(|(f, &v)| scale(f.mode, v))
                        .collect(),
                    ar: scratch.ar.as_ref().map_or(0.0, |s| s.output[i]),
                    lagged: scratch.lagged.iter().map(|s| s.output[i]).collect(),
                    yhat: scratch.yhat[i],
                }
            })
            .collect()
    }

    /// Accumulates parameter gradients for the sample at `origin` given
    /// `grad_yhat = d loss / d yhat` per horizon step. Must follow a
    /// [`Network::forward`] on the same origin.
    pub fn backward(
        &self,
        params: &[f64],
        design: &DesignMatrix,
        grad_yhat: &[f64],
        origin: usize,
        scratch: &mut Scratch,
        grads: &mut [f64],
    ) {
        for i in 0..self.spec.horizon {
            let t = origin + i;
            let gi = grad_yhat[i];
            scratch.grad_out[i] = gi;
            if gi == 0.0 {
                continue;
            }
            let trend = scratch.trend_vals[i];
            // d yhat / d trend: 1 plus every multiplicative component value
            let k = 1.0 + scratch.mult_sums[i];
            grads[self.layout.rho0] += gi * k;
            if let Some(g) = &self.layout.growth {
                let tn = design.t_norm[t];
                grads[g.delta0] += gi * k * tn;
                let gd = &mut grads[g.deltas.clone()];
                for (j, &c) in self.spec.trend.changepoints.iter().enumerate() {
                    if tn >= c {
                        gd[j] += gi * k * (tn - c);
                    }
                }
            }
            for ((s, range), block) in self
                .spec
                .seasonalities
                .iter()
                .zip(&self.layout.seasonal)
                .zip(&design.seasonal)
            {
                let factor = match s.mode {
                    ComponentMode::Additive => gi,
                    ComponentMode::Multiplicative => gi * trend,
                };
                let row = block.row(t);
                let gs = &mut grads[range.clone()];
                for (gc, &feat) in gs.iter_mut().zip(row) {
                    *gc += factor * feat;
                }
            }
            if design.events.width() > 0 {
                let row = design.events.row(t);
                let ge = &mut grads[self.layout.events.clone()];
                for (c, &x) in row.iter().enumerate() {
                    if x == 0.0 {
                        continue;
                    }
                    let factor = match self.event_col_modes[c] {
                        ComponentMode::Additive => gi,
                        ComponentMode::Multiplicative => gi * trend,
                    };
                    ge[c] += factor * x;
                }
            }
            for (f, spec) in self.spec.future_regressors.iter().enumerate() {
                let factor = match spec.mode {
                    ComponentMode::Additive => gi,
                    ComponentMode::Multiplicative => gi * trend,
                };
                grads[self.layout.future.start + f] += factor * design.future[f][t];
            }
        }
        if let Some(ar_layout) = &self.layout.ar {
            let s = scratch.ar.as_mut().expect("ar scratch allocated");
            let lags = std::mem::take(&mut scratch.ar_lags);
            mlp_backward(ar_layout, params, &lags, s, &scratch.grad_out, grads);
            scratch.ar_lags = lags;
        }
        for (kx, layout) in self.layout.lagged.iter().enumerate() {
            let lags = std::mem::take(&mut scratch.lagged_lags[kx]);
            mlp_backward(
                layout,
                params,
                &lags,
                &mut scratch.lagged[kx],
                &scratch.grad_out,
                grads,
            );
            scratch.lagged_lags[kx] = lags;
        }
    }
}
