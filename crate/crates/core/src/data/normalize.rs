//! Series normalization modes and their invertible affine states.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Normalization procedure selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NormMode {
    /// `minmax` if the series is binary, else `soft`.
    #[default]
    Auto,
    /// Bypass normalization.
    Off,
    /// Minimum to 0.0, maximum to 1.0.
    MinMax,
    /// Zero-center, divide by the standard deviation.
    Standardize,
    /// Minimum to 0.0, 95th quantile to 1.0.
    Soft,
    /// Minimum to 0.1, 90th quantile to 0.9.
    Soft1,
}

impl NormMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "off" => Ok(Self::Off),
            "minmax" => Ok(Self::MinMax),
            "standardize" => Ok(Self::Standardize),
            "soft" => Ok(Self::Soft),
            "soft1" => Ok(Self::Soft1),
            other => Err(Error::Config(format!(
                "unknown normalization mode '{other}'"
            ))),
        }
    }
}

/// Affine transform state: `z = (x - shift) / scale`.
///
/// Applying then inverting reproduces inputs to within 1e-12 relative error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormState {
    pub mode: NormMode,
    pub shift: f64,
    pub scale: f64,
}

impl NormState {
    pub fn identity() -> Self {
        Self {
            mode: NormMode::Off,
            shift: 0.0,
            scale: 1.0,
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.shift) / self.scale
    }

    pub fn invert(&self, z: f64) -> f64 {
        self.shift + self.scale * z
    }
}

/// Normalizes a complete series, returning the transformed values and the
/// state needed to invert them. `NAN` entries pass through untouched.
pub fn normalize_slice(values: &[f64], mode: NormMode) -> Result<(Vec<f64>, NormState)> {
    let state = fit_state(values, mode)?;
    let out = values.iter().map(|&v| state.apply(v)).collect();
    Ok((out, state))
}

/// [`normalize_slice`] on a [`super::TimeSeries`].
pub fn normalize(
    series: &super::TimeSeries,
    mode: NormMode,
) -> Result<(super::TimeSeries, NormState)> {
    let (values, state) = normalize_slice(series.values(), mode)?;
    Ok((series.with_values(values), state))
}

fn fit_state(values: &[f64], mode: NormMode) -> Result<NormState> {
    let observed: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    if observed.is_empty() {
        return Err(Error::InsufficientData {
            required: 1,
            actual: 0,
        });
    }
    let mode = match mode {
        NormMode::Auto => {
            if is_binary(&observed) {
                NormMode::MinMax
            } else {
                NormMode::Soft
            }
        }
        m => m,
    };
    let min = observed.iter().copied().fold(f64::INFINITY, f64::min);
    let max = observed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (shift, scale) = match mode {
        NormMode::Off => (0.0, 1.0),
        NormMode::MinMax => (min, max - min),
        NormMode::Standardize => {
            let n = observed.len() as f64;
            let mean = observed.iter().sum::<f64>() / n;
            let var = observed.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            (mean, var.sqrt())
        }
        NormMode::Soft => (min, quantile(&observed, 0.95) - min),
        NormMode::Soft1 => {
            let scale = (quantile(&observed, 0.90) - min) / 0.8;
            (min - 0.1 * scale, scale)
        }
        NormMode::Auto => unreachable!("auto resolved above"),
    };
    if mode != NormMode::Off && (scale.is_nan() || scale <= 0.0) {
        return Err(Error::DegenerateScale {
            context: format!("{mode:?} scale denominator is {scale}"),
        });
    }
    Ok(NormState { mode, shift, scale })
}

fn is_binary(observed: &[f64]) -> bool {
    observed.iter().all(|&v| v == 0.0 || v == 1.0)
}

/// Quantile by linear interpolation between order statistics.
pub fn quantile(observed: &[f64], q: f64) -> f64 {
    let mut sorted = observed.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in observed values"));
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}
