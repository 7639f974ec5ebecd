//! Flat parameter vector layout. Every learnable weight of every module
//! lives in one `Vec<f64>`; the layout records where each block sits so
//! the optimizer can stay structure-blind.

use super::config::ModelSpec;
use crate::lagged::MlpLayout;
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// Trend growth block: initial rate plus one adjustment per changepoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthLayout {
    pub delta0: usize,
    pub deltas: Range<usize>,
}

/// Placement of every module's parameters inside the flat vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamLayout {
    /// Static offset; present in every model.
    pub rho0: usize,
    /// Present when the trend is enabled.
    pub growth: Option<GrowthLayout>,
    /// Per seasonality: `2k` coefficients `[a_1..a_k, b_1..b_k]`.
    pub seasonal: Vec<Range<usize>>,
    /// One weight per expanded event column.
    pub events: Range<usize>,
    /// One coefficient per future regressor.
    pub future: Range<usize>,
    pub ar: Option<MlpLayout>,
    pub lagged: Vec<MlpLayout>,
    pub len: usize,
}

impl ParamLayout {
    pub fn build(spec: &ModelSpec) -> Self {
        let mut cursor = 0usize;
        let rho0 = cursor;
        cursor += 1;
        let growth = spec.trend.enabled.then(|| {
            let delta0 = cursor;
            cursor += 1;
            let deltas = cursor..cursor + spec.trend.changepoints.len();
            cursor = deltas.end;
            GrowthLayout { delta0, deltas }
        });
        let seasonal = spec
            .seasonalities
            .iter()
            .map(|s| {
                let r = cursor..cursor + s.coeff_count();
                cursor = r.end;
                r
            })
            .collect();
        let event_width: usize = spec.events.iter().map(|e| e.column_count()).sum();
        let events = cursor..cursor + event_width;
        cursor = events.end;
        let future = cursor..cursor + spec.future_regressors.len();
        cursor = future.end;
        let ar = spec.ar.as_ref().map(|a| {
            let (layout, end) = MlpLayout::place(a.spec.clone(), cursor);
            cursor = end;
            layout
        });
        let lagged = spec
            .lagged_regressors
            .iter()
            .map(|(_, m)| {
                let (layout, end) = MlpLayout::place(m.spec.clone(), cursor);
                cursor = end;
                layout
            })
            .collect();
        Self {
            rho0,
            growth,
            seasonal,
            events,
            future,
            ar,
            lagged,
            len: cursor,
        }
    }

    /// Fresh parameter vector: zeros for all linear blocks, seeded uniform
    /// init for MLP weight layers.
    pub fn init_params(&self, seed: u64) -> Vec<f64> {
        let mut params = vec![0.0; self.len];
        if let Some(ar) = &self.ar {
            ar.init(&mut params, seed ^ 0x5eed_a100);
        }
        for (i, l) in self.lagged.iter().enumerate() {
            l.init(&mut params, seed ^ 0x5eed_1a00 ^ (i as u64 + 1));
        }
        params
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::config::{resolve, ArConfig, ModelConfig, SeasonalityChoice};

    #[test]
    fn layout_is_contiguous_and_sized() {
        let ts: Vec<i64> = (0..900i64).map(|d| d * 86_400).collect();
        let y: Vec<f64> = (0..900).map(|i| (i as f64).sin()).collect();
        let frame = crate::data::Frame::from_raw(&ts, y, vec![]).unwrap();
        let config = ModelConfig {
            horizon: 3,
            seasonality: SeasonalityChoice::Auto,
            ar: Some(ArConfig {
                n_lags: 5,
                hidden_layers: vec![8, 8],
                sparsity: 0.0,
                penalty: Default::default(),
            }),
            ..ModelConfig::default()
        };
        let spec = resolve(&config, &frame).unwrap();
        let layout = ParamLayout::build(&spec);
        // rho0 + delta0 + 10 deltas + yearly 12 + weekly 6 + MLP
        let mlp = 8 * 5 + 8 + 8 * 8 + 8 + 3 * 8;
        assert_eq!(layout.len, 1 + 1 + 10 + 12 + 6 + mlp);
        let params = layout.init_params(7);
        assert_eq!(params.len(), layout.len);
        // linear blocks start at zero; MLP weights do not
        assert_eq!(params[layout.rho0], 0.0);
        let ar = layout.ar.as_ref().unwrap();
        assert!(params[ar.weights[0].clone()].iter().any(|&w| w != 0.0));
        // deterministic init
        assert_eq!(params, layout.init_params(7));
        assert_ne!(params, layout.init_params(8));
    }
}
