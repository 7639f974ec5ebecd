//! Fourier-term seasonality over arbitrary periodicities measured in days.

use super::ComponentMode;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// One seasonal periodicity: period length in days, Fourier order `k`, and
/// composition mode. The `2k` coefficients live in the parameter vector as
/// `[a_1..a_k, b_1..b_k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonalitySpec {
    pub name: String,
    pub period_days: f64,
    pub fourier_order: usize,
    pub mode: ComponentMode,
}

impl SeasonalitySpec {
    pub fn coeff_count(&self) -> usize {
        2 * self.fourier_order
    }
}

/// Writes the `2k` Fourier basis values `[cos_1..cos_k, sin_1..sin_k]` for
/// time `t_days` (days since epoch) into `out`.
pub fn fourier_features(t_days: f64, period_days: f64, k: usize, out: &mut [f64]) {
    debug_assert_eq!(out.len(), 2 * k);
    for j in 1..=k {
        let arg = TAU * j as f64 * t_days / period_days;
        out[j - 1] = arg.cos();
        out[k + j - 1] = arg.sin();
    }
}

/// Evaluates one seasonality as the dot product of its basis features and
/// coefficients `[a_1..a_k, b_1..b_k]`.
pub fn seasonality_eval(t_days: f64, spec: &SeasonalitySpec, coeffs: &[f64]) -> f64 {
    let k = spec.fourier_order;
    debug_assert_eq!(coeffs.len(), 2 * k);
    let mut features = vec![0.0; 2 * k];
    fourier_features(t_days, spec.period_days, k, &mut features);
    dot(&features, coeffs)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Default periodicities considered for auto-activation, with their
/// default Fourier orders.
const AUTO_CANDIDATES: [(&str, f64, usize); 3] =
    [("yearly", 365.25, 6), ("weekly", 7.0, 3), ("daily", 1.0, 6)];

/// Enables each default periodicity iff the data frequency is strictly
/// higher resolution than the period and at least two full periods of data
/// exist.
pub fn auto_configure_seasonality(freq_seconds: i64, span_seconds: i64) -> Vec<SeasonalitySpec> {
    let freq_days = freq_seconds as f64 / super::super::data::SECONDS_PER_DAY;
    let span_days = span_seconds as f64 / super::super::data::SECONDS_PER_DAY;
    AUTO_CANDIDATES
        .iter()
        .filter(|(_, period, _)| freq_days < *period && span_days >= 2.0 * period)
        .map(|(name, period, k)| SeasonalitySpec {
            name: (*name).to_string(),
            period_days: *period,
            fourier_order: *k,
            mode: ComponentMode::Additive,
        })
        .collect()
}
