//! General log-transform regularization and its ramp schedule.

/// Scaled and shifted log-transform of absolute weight values:
/// `(1/n) sum log(1/(eps*e) + alpha*|w_i|) + log(eps) + 1`.
///
/// Zero weights give exactly zero penalty for any `eps`.
pub fn log_penalty(theta: &[f64], eps: f64, alpha: f64) -> f64 {
    if theta.is_empty() {
        return 0.0;
    }
    let n = theta.len() as f64;
    let base = 1.0 / (eps * std::f64::consts::E);
    let sum: f64 = theta.iter().map(|w| (base + alpha * w.abs()).ln()).sum();
    sum / n + eps.ln() + 1.0
}

/// Gradient of [`log_penalty`] scaled by `strength`, accumulated into
/// `grads` (same layout as `theta`).
pub fn log_penalty_grad(theta: &[f64], eps: f64, alpha: f64, strength: f64, grads: &mut [f64]) {
    debug_assert_eq!(theta.len(), grads.len());
    if theta.is_empty() {
        return;
    }
    let n = theta.len() as f64;
    let base = 1.0 / (eps * std::f64::consts::E);
    for (w, g) in theta.iter().zip(grads.iter_mut()) {
        *g += strength * alpha * w.signum() / (base + alpha * w.abs()) / n;
    }
}

/// Ramped regularization strength: zero before `ramp_start`, then linear up
/// to the full strength at the end of training.
pub fn reg_schedule(progress: f64, strength: f64, ramp_start: f64) -> f64 {
    if strength == 0.0 || progress < ramp_start {
        return 0.0;
    }
    if ramp_start >= 1.0 {
        return strength;
    }
    let ramp = (progress - ramp_start) / (1.0 - ramp_start);
    strength * ramp.min(1.0)
}
