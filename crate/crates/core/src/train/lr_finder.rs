//! Learning-rate range test: exponentially sweep the learning rate across
//! mini-batch steps, then pick the rate at the steepest loss descent.

use crate::error::DivergedTest;

/// Sweep start.
pub const LR_TEST_MIN: f64 = 1e-7;
/// Sweep end.
pub const LR_TEST_MAX: f64 = 1e2;
/// Iterations excluded at the start of the sweep.
const SKIP_HEAD: usize = 10;
/// Iterations excluded at the end of the sweep.
const SKIP_TAIL: usize = 5;
/// Fallback when every recorded loss is non-finite.
pub const LR_FALLBACK: f64 = 1e-3;

/// Exponentially spaced learning rates from `LR_TEST_MIN` to `LR_TEST_MAX`.
pub fn lr_schedule_points(iterations: usize) -> Vec<f64> {
    let n = iterations.max(2);
    let ratio = LR_TEST_MAX / LR_TEST_MIN;
    (0..n)
        .map(|i| LR_TEST_MIN * ratio.powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Smoothing factor for the recorded losses. Mini-batch losses are far too
/// noisy for a short moving average; an exponential average with this
/// factor makes the descent cliff dominate the discrete gradient.
pub const LOSS_EMA_BETA: f64 = 0.98;

/// Learning rate at the position of steepest loss descent, excluding the
/// first 10 and last 5 iterations. Losses are smoothed with a
/// bias-corrected exponential moving average before taking the discrete
/// gradient; the sweep is truncated at the first non-finite loss.
pub fn select_steepest(lrs: &[f64], losses: &[f64]) -> Result<f64, DivergedTest> {
    debug_assert_eq!(lrs.len(), losses.len());
    let usable = losses
        .iter()
        .position(|l| !l.is_finite())
        .unwrap_or(losses.len());
    if usable <= SKIP_HEAD + SKIP_TAIL + 1 {
        return Err(DivergedTest);
    }
    let smoothed = ema_smooth(&losses[..usable], LOSS_EMA_BETA);
    // slope over a wider baseline so a sustained descent outweighs
    // batch-to-batch wiggle
    let w = (usable / 50).max(1);
    let lo = SKIP_HEAD.max(w);
    let hi = usable.saturating_sub(SKIP_TAIL.max(w) + 1);
    if lo >= hi {
        return Err(DivergedTest);
    }
    let mut best = (f64::INFINITY, lo);
    for i in lo..hi {
        let grad = (smoothed[i + w] - smoothed[i - w]) / (2 * w) as f64;
        if grad < best.0 {
            best = (grad, i);
        }
    }
    Ok(lrs[best.1])
}

/// `10^(mean of log10(eta_i))`.
pub fn log10_mean(etas: &[f64]) -> f64 {
    let mean = etas.iter().map(|e| e.log10()).sum::<f64>() / etas.len() as f64;
    10f64.powf(mean)
}

/// Bias-corrected exponential moving average.
pub fn ema_smooth(values: &[f64], beta: f64) -> Vec<f64> {
    let mut ema = 0.0;
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            ema = beta * ema + (1.0 - beta) * v;
            ema / (1.0 - beta.powi(i as i32 + 1))
        })
        .collect()
}
