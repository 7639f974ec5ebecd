//! Time-feature model components: piecewise-linear trend, Fourier
//! seasonality, events and future regressors, plus their additive or
//! trend-multiplied composition.

pub mod events;
pub mod seasonality;
pub mod trend;

use serde::{Deserialize, Serialize};

/// Whether a component adds to the forecast directly or is scaled by the
/// trend first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ComponentMode {
    #[default]
    Additive,
    Multiplicative,
}

impl ComponentMode {
    pub fn parse(s: &str) -> crate::error::Result<Self> {
        match s {
            "additive" => Ok(Self::Additive),
            "multiplicative" => Ok(Self::Multiplicative),
            other => Err(crate::error::Error::Config(format!(
                "unknown component mode '{other}' (expected additive or multiplicative)"
            ))),
        }
    }
}

/// A future regressor: a covariate with known future values whose effect is
/// a single learned coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FutureRegressorSpec {
    pub name: String,
    pub mode: ComponentMode,
}

/// Sums enabled components into the forecast for one timestamp.
///
/// `additive_sum` collects raw values of additive components (excluding the
/// trend itself); `multiplicative_sum` collects raw values of components
/// configured to be scaled by the trend.
pub fn compose(trend: f64, additive_sum: f64, multiplicative_sum: f64) -> f64 {
    trend + trend * multiplicative_sum + additive_sum
}
