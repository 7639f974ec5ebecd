//! Model configuration, parameters, the composed network, fitting and
//! prediction.

pub mod config;
pub mod fit;
pub mod network;
pub mod params;
pub mod predict;
pub mod serialize;

pub use config::{
    ArConfig, EventConfig, LaggedRegressorConfig, ModelConfig, ModelSpec, PenaltyKind,
    SeasonalityChoice, TimeScale, TrendConfig,
};
pub use fit::{batch_objective, fit, prepare_training, EpochRecord, FitReport};
pub use predict::{predict, ForecastFrame, PredictionContext};
pub use serialize::{load_model, save_model, MODEL_FORMAT_VERSION};

use crate::components::trend::TrendParams;
use crate::data::NormState;
use crate::error::{Error, Result};
use crate::lagged::ArNetParams;
use params::ParamLayout;
use serde::{Deserialize, Serialize};

/// A trained model: resolved spec, every learned parameter, and the
/// normalization state needed to map predictions back to data units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub spec: ModelSpec,
    pub layout: ParamLayout,
    pub params: Vec<f64>,
    pub y_state: NormState,
    /// Aligned with `spec.lagged_regressors`.
    pub covariate_states: Vec<NormState>,
    /// Aligned with `spec.future_regressors`.
    pub future_states: Vec<NormState>,
}

impl FittedModel {
    /// Learned trend parameters in normalized space.
    pub fn trend_params(&self) -> TrendParams {
        match &self.layout.growth {
            Some(g) => TrendParams {
                delta0: self.params[g.delta0],
                rho0: self.params[self.layout.rho0],
                changepoints: self.spec.trend.changepoints.clone(),
                deltas: self.params[g.deltas.clone()].to_vec(),
            },
            None => TrendParams::flat(self.params[self.layout.rho0]),
        }
    }

    /// `(a, b)` Fourier coefficient vectors of a named seasonality.
    pub fn seasonal_coefficients(&self, name: &str) -> Option<(Vec<f64>, Vec<f64>)> {
        let idx = self
            .spec
            .seasonalities
            .iter()
            .position(|s| s.name == name)?;
        let range = self.layout.seasonal[idx].clone();
        let coeffs = &self.params[range];
        let k = coeffs.len() / 2;
        Some((coeffs[..k].to_vec(), coeffs[k..].to_vec()))
    }

    /// The auto-regression module's parameters, when enabled.
    pub fn ar_net(&self) -> Option<ArNetParams> {
        self.layout.ar.as_ref().map(|l| self.extract_net(l))
    }

    /// A named lagged-regressor module's parameters.
    pub fn lagged_net(&self, name: &str) -> Option<ArNetParams> {
        let idx = self
            .spec
            .lagged_regressors
            .iter()
            .position(|(n, _)| n == name)?;
        Some(self.extract_net(&self.layout.lagged[idx]))
    }

    // modules are laid out contiguously from the first weight matrix to
    // the (always last) output layer
    fn extract_net(&self, layout: &crate::lagged::MlpLayout) -> ArNetParams {
        let lo = layout.weights[0].start;
        let hi = layout.weights.last().expect("at least one layer").end;
        let (rebased, len) = crate::lagged::MlpLayout::place(layout.spec.clone(), 0);
        debug_assert_eq!(len, hi - lo);
        ArNetParams {
            layout: rebased,
            params: self.params[lo..hi].to_vec(),
        }
    }

    /// Per-lag importance of the AR module.
    pub fn ar_lag_importance(&self) -> Result<Vec<f64>> {
        let net = self
            .ar_net()
            .ok_or_else(|| Error::Config("model has no auto-regression module".into()))?;
        Ok(crate::lagged::lag_importance(&net))
    }
}
