//! The 1cycle learning-rate schedule: linear warmup from `eta/100` to the
//! peak `eta` at 30% of training, then cosine annealing down to `eta/5000`.

use std::f64::consts::PI;

/// Fraction of training spent warming up to the peak learning rate.
pub const WARMUP_FRACTION: f64 = 0.3;
/// Peak-to-initial learning rate ratio.
pub const WARMUP_DIV: f64 = 100.0;
/// Peak-to-final learning rate ratio.
pub const FINAL_DIV: f64 = 5000.0;

/// Learning rate at `progress` in `[0, 1]` for peak rate `eta`.
pub fn one_cycle_lr(progress: f64, eta: f64) -> f64 {
    let p = progress.clamp(0.0, 1.0);
    let start = eta / WARMUP_DIV;
    let floor = eta / FINAL_DIV;
    if p <= WARMUP_FRACTION {
        start + (eta - start) * (p / WARMUP_FRACTION)
    } else {
        let x = (p - WARMUP_FRACTION) / (1.0 - WARMUP_FRACTION);
        floor + (eta - floor) * 0.5 * (1.0 + (PI * x).cos())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ETA: f64 = 0.2;

    #[test]
    fn endpoint_values() {
        assert!((one_cycle_lr(0.0, ETA) - ETA / 100.0).abs() < 1e-15);
        assert!((one_cycle_lr(0.3, ETA) - ETA).abs() < 1e-15);
        assert!((one_cycle_lr(1.0, ETA) - ETA / 5000.0).abs() < 1e-15);
    }

    #[test]
    fn warmup_midpoint_is_linear() {
        let want = (ETA / 100.0 + ETA) / 2.0;
        assert!((one_cycle_lr(0.15, ETA) - want).abs() < 1e-15);
    }

    #[test]
    fn cosine_midpoint() {
        let want = (ETA + ETA / 5000.0) / 2.0;
        assert!((one_cycle_lr(0.65, ETA) - want).abs() < 1e-12);
    }

    #[test]
    fn continuous_and_peaks_at_30_percent() {
        let mut max = (f64::MIN, 0.0);
        let mut prev = one_cycle_lr(0.0, ETA);
        for i in 1..=10_000 {
            let p = i as f64 * 1e-4;
            let lr = one_cycle_lr(p, ETA);
            assert!((lr - prev).abs() < 1e-3 * ETA, "jump at {p}");
            if lr > max.0 {
                max = (lr, p);
            }
            prev = lr;
        }
        assert!((max.0 - ETA).abs() < 1e-12);
        assert!((max.1 - 0.3).abs() < 1e-9);
    }
}
