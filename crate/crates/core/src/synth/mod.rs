//! Synthetic decomposition benchmark: generated component series (trend,
//! seasonality, events, future regressor, auto-regression, lagged effect),
//! their additive or trend-multiplied composition, and zero-centered
//! component scoring against ground truth.

mod scenario;

pub use scenario::{
    compose_scenario, write_scenario_csvs, ComponentKind, ComponentSeries, GeneratedSeries,
    ScenarioId, SynthScenario,
};

use crate::error::{Error, Result};
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Standard normal draw via Box-Muller, deterministic given the rng.
pub(crate) fn randn(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(1e-12..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Scales a series so its minimum is 0 and maximum 1. Returns the scaled
/// series with the original `(min, range)`.
pub fn scale_01(series: &[f64]) -> (Vec<f64>, f64, f64) {
    let min = series.iter().copied().fold(f64::INFINITY, f64::min);
    let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    if range == 0.0 {
        return (vec![0.0; series.len()], min, 1.0);
    }
    (
        series.iter().map(|v| (v - min) / range).collect(),
        min,
        range,
    )
}

/// Piecewise-linear trend with one random changepoint: linear increase up
/// to the peak, linear decrease after, scaled to `[0, 1]`.
pub fn gen_trend(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    assert!(len >= 2);
    let lo = len / 5;
    let hi = len - len / 5;
    let cp = rng.random_range(lo..hi.max(lo + 1));
    let start: f64 = rng.random_range(0.0..0.8);
    let end: f64 = rng.random_range(0.0..0.8);
    let series: Vec<f64> = (0..len)
        .map(|i| {
            if i <= cp {
                start + (1.0 - start) * i as f64 / cp as f64
            } else {
                1.0 - (1.0 - end) * (i - cp) as f64 / (len - 1 - cp) as f64
            }
        })
        .collect();
    scale_01(&series).0
}

/// Fourier seasonality with the given coefficient vectors; `t` is the
/// sample index in days.
pub fn seasonality_series(len: usize, period: f64, a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    (0..len)
        .map(|t| {
            let t = t as f64;
            a.iter()
                .zip(b)
                .enumerate()
                .map(|(j, (aj, bj))| {
                    let arg = TAU * (j + 1) as f64 * t / period;
                    aj * arg.cos() + bj * arg.sin()
                })
                .sum()
        })
        .collect()
}

/// Seasonal component with `k` Fourier terms and coefficients drawn
/// uniformly from `[0, 1)`. Unscaled; callers scale before composition.
pub fn gen_seasonality(len: usize, period: f64, k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let a: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
    let b: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
    seasonality_series(len, period, &a, &b)
}

/// Binary event series with exactly `occurrences` ones at distinct random
/// positions.
pub fn gen_events(len: usize, occurrences: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    assert!(occurrences <= len);
    let mut positions: Vec<usize> = (0..len).collect();
    // partial Fisher-Yates: the first `occurrences` entries end up random
    for i in 0..occurrences {
        let j = rng.random_range(i..len);
        positions.swap(i, j);
    }
    let mut series = vec![0.0; len];
    for &p in &positions[..occurrences] {
        series[p] = 1.0;
    }
    series
}

/// Largest root modulus of `z^p - phi_1 z^(p-1) - ... - phi_p`, the
/// companion-matrix spectral radius.
pub fn spectral_radius(phi: &[f64]) -> f64 {
    match phi.len() {
        0 => 0.0,
        1 => phi[0].abs(),
        _ => {
            let mut coeffs = vec![1.0];
            coeffs.extend(phi.iter().map(|c| -c));
            durand_kerner_max_modulus(&coeffs)
        }
    }
}

/// AR(p) process `y_t = sum phi_i y_{t-i} + sigma * noise` with a 100
/// sample burn-in discarded. Rejects non-stationary coefficients.
pub fn gen_ar_process(
    len: usize,
    phi: &[f64],
    noise_sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let radius = spectral_radius(phi);
    if radius >= 1.0 {
        return Err(Error::NonStationary { radius });
    }
    let burn = 100;
    let mut series = Vec::with_capacity(burn + len);
    for t in 0..burn + len {
        let mut v = noise_sigma * randn(rng);
        for (i, &c) in phi.iter().enumerate() {
            if t > i {
                v += c * series[t - 1 - i];
            }
        }
        series.push(v);
    }
    Ok(series.split_off(burn))
}

/// Lagged-regressor pair: covariate `x` from an AR(2) process and the
/// effect `L(t) = c_1 x_{t-1} + c_2 x_{t-2} + c_3 x_{t-3}` with weights
/// drawn from `(0, 1]`.
pub fn gen_lagged_effect(
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<f64>, Vec<f64>, [f64; 3])> {
    let weights = [
        1.0 - rng.random_range(0.0..1.0),
        1.0 - rng.random_range(0.0..1.0),
        1.0 - rng.random_range(0.0..1.0),
    ];
    let full = gen_ar_process(len + 3, &[0.3, 0.3], 0.1, rng)?;
    let effect = lagged_effect_from(&full, &weights);
    Ok((full[3..].to_vec(), effect, weights))
}

/// `L(t)` recomputed from the padded covariate and weights; `padded`
/// carries 3 extra leading samples so every position has full lags.
pub fn lagged_effect_from(padded: &[f64], weights: &[f64; 3]) -> Vec<f64> {
    (3..padded.len())
        .map(|t| {
            weights[0] * padded[t - 1] + weights[1] * padded[t - 2] + weights[2] * padded[t - 3]
        })
        .collect()
}

/// Zero-centered RMSE between a ground-truth component and its predicted
/// counterpart. Centering absorbs the arbitrary offset allocation among
/// additive components; an absent prediction scores as all zeros.
pub fn score_decomposition(truth: &[f64], predicted: &[f64]) -> Result<f64> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: predicted.len(),
        });
    }
    let center = |v: &[f64]| -> Vec<f64> {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| x - mean).collect()
    };
    let t = center(truth);
    let p = center(predicted);
    let mse = t
        .iter()
        .zip(&p)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / t.len() as f64;
    Ok(mse.sqrt())
}

type Complex = (f64, f64);

fn c_mul(a: Complex, b: Complex) -> Complex {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn c_sub(a: Complex, b: Complex) -> Complex {
    (a.0 - b.0, a.1 - b.1)
}

fn c_div(a: Complex, b: Complex) -> Complex {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn c_abs(a: Complex) -> f64 {
    a.0.hypot(a.1)
}

fn poly_eval(coeffs: &[f64], z: Complex) -> Complex {
    let mut acc = (0.0, 0.0);
    for &c in coeffs {
        acc = c_mul(acc, z);
        acc = (acc.0 + c, acc.1);
    }
    acc
}

/// Durand-Kerner root finding on a monic real polynomial; returns the
/// largest root modulus.
fn durand_kerner_max_modulus(coeffs: &[f64]) -> f64 {
    let degree = coeffs.len() - 1;
    let mut roots: Vec<Complex> = (0..degree)
        .map(|k| {
            // standard non-real, non-unit starting points
            let angle = 0.4 + 0.9 * k as f64;
            (
                angle.cos() * (1.0 + 0.3 * k as f64),
                angle.sin() * (1.0 + 0.3 * k as f64),
            )
        })
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let mut denom = (1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    denom = c_mul(denom, c_sub(roots[i], roots[j]));
                }
            }
            let step = c_div(poly_eval(coeffs, roots[i]), denom);
            roots[i] = c_sub(roots[i], step);
            max_step = max_step.max(c_abs(step));
        }
        if max_step < 1e-12 {
            break;
        }
    }
    roots.iter().map(|&r| c_abs(r)).fold(0.0, f64::max)
}
