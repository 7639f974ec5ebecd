//! Continuous piecewise-linear trend with changepoints.
//!
//! The trend at normalized time `t` is `(delta0 + G(t)'d) * t + (rho0 +
//! G(t)'r)` where `G_j(t) = 1` iff `t >= c_j` and offsets are tied to rate
//! changes by `r_j = -c_j * d_j`, which keeps the series continuous. Beyond
//! the training range the final segment's rate extrapolates linearly.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Fraction of the training range reserved for the final trend segment
/// when changepoints are placed automatically.
pub const FINAL_SEGMENT_FRACTION: f64 = 0.15;

/// Learned trend parameters. Changepoints are normalized times in (0, 1),
/// sorted ascending; offsets are derived, not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendParams {
    pub delta0: f64,
    pub rho0: f64,
    pub changepoints: Vec<f64>,
    pub deltas: Vec<f64>,
}

impl TrendParams {
    pub fn flat(offset: f64) -> Self {
        Self {
            delta0: 0.0,
            rho0: offset,
            changepoints: Vec::new(),
            deltas: Vec::new(),
        }
    }
}

/// Evaluates the trend at normalized time `t`.
pub fn trend_eval(t: f64, params: &TrendParams) -> f64 {
    trend_value(
        t,
        params.delta0,
        params.rho0,
        &params.changepoints,
        &params.deltas,
    )
}

/// Slice-level trend evaluation, shared with the training path.
pub fn trend_value(t: f64, delta0: f64, rho0: f64, changepoints: &[f64], deltas: &[f64]) -> f64 {
    debug_assert_eq!(changepoints.len(), deltas.len());
    let mut rate = delta0;
    let mut offset = rho0;
    for (&c, &d) in changepoints.iter().zip(deltas) {
        if t >= c {
            rate += d;
            offset -= c * d;
        }
    }
    rate * t + offset
}

/// Places `n_c` equidistant changepoints over the first
/// `1 - final_segment_fraction` of the normalized training range.
pub fn init_changepoints(n_c: usize, final_segment_fraction: f64) -> Vec<f64> {
    let span = 1.0 - final_segment_fraction;
    (1..=n_c)
        .map(|j| j as f64 * span / (n_c + 1) as f64)
        .collect()
}

/// Validates user-supplied changepoint times against the training range.
pub fn validate_changepoints(changepoints: &[f64]) -> Result<Vec<f64>> {
    let mut sorted = changepoints.to_vec();
    for &c in &sorted {
        if !(c > 0.0 && c < 1.0) || !c.is_finite() {
            return Err(Error::InvalidChangepoint { value: c });
        }
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite changepoints"));
    Ok(sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_changepoint_hand_values() {
        // rate 1 before c=0.5, adjustment -2 after; offset tie gives
        // rho_1 = -0.5 * (-2) = 1, so T(0.75) = -1*0.75 + 1 = 0.25
        let p = TrendParams {
            delta0: 1.0,
            rho0: 0.0,
            changepoints: vec![0.5],
            deltas: vec![-2.0],
        };
        assert!((trend_eval(0.25, &p) - 0.25).abs() < 1e-15);
        assert!((trend_eval(0.5, &p) - 0.5).abs() < 1e-15);
        assert!((trend_eval(0.75, &p) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn no_changepoints_is_a_pure_line() {
        let p = TrendParams {
            delta0: 2.0,
            rho0: 1.0,
            changepoints: vec![],
            deltas: vec![],
        };
        assert_eq!(trend_eval(0.3, &p), 2.0 * 0.3 + 1.0);
    }

    #[test]
    fn zero_adjustments_match_the_base_line() {
        let p = TrendParams {
            delta0: 2.0,
            rho0: 1.0,
            changepoints: vec![0.2, 0.6],
            deltas: vec![0.0, 0.0],
        };
        for t in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5] {
            assert!((trend_eval(t, &p) - (2.0 * t + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn equidistant_placement_over_first_85_percent() {
        let got = init_changepoints(4, 0.15);
        let want = [0.17, 0.34, 0.51, 0.68];
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(init_changepoints(0, 0.15).is_empty());
    }

    #[test]
    fn custom_changepoints_validated() {
        assert_eq!(validate_changepoints(&[0.2, 0.9]).unwrap(), vec![0.2, 0.9]);
        assert!(validate_changepoints(&[0.0]).is_err());
        assert!(validate_changepoints(&[1.2]).is_err());
    }

    #[test]
    fn continuity_at_changepoints_for_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n_c = rng.random_range(1..6usize);
            let changepoints: Vec<f64> = {
                let mut c: Vec<f64> = (0..n_c).map(|_| rng.random_range(0.05..0.95)).collect();
                c.sort_by(|a, b| a.partial_cmp(b).unwrap());
                c
            };
            let p = TrendParams {
                delta0: rng.random_range(-5.0..5.0),
                rho0: rng.random_range(-5.0..5.0),
                deltas: (0..n_c).map(|_| rng.random_range(-5.0..5.0)).collect(),
                changepoints,
            };
            for &c in &p.changepoints {
                let eps = 1e-12;
                let jump = (trend_eval(c - eps, &p) - trend_eval(c + eps, &p)).abs();
                assert!(jump < 1e-9, "discontinuity {jump} at {c}");
            }
        }
    }

    #[test]
    fn linear_between_changepoints() {
        let p = TrendParams {
            delta0: 1.5,
            rho0: -0.5,
            changepoints: vec![0.3, 0.7],
            deltas: vec![2.0, -4.0],
        };
        // second differences vanish on a changepoint-free grid
        for window in [(0.0, 0.29), (0.31, 0.69), (0.71, 1.3)] {
            let grid: Vec<f64> = (0..50)
                .map(|i| window.0 + (window.1 - window.0) * i as f64 / 49.0)
                .collect();
            let vals: Vec<f64> = grid.iter().map(|&t| trend_eval(t, &p)).collect();
            for w in vals.windows(3) {
                let second = w[2] - 2.0 * w[1] + w[0];
                assert!(second.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn extrapolates_with_final_rate() {
        let p = TrendParams {
            delta0: 1.0,
            rho0: 0.0,
            changepoints: vec![0.5],
            deltas: vec![1.0],
        };
        // past the last changepoint the rate is 2; check beyond t=1
        let t1 = trend_eval(2.0, &p);
        let t2 = trend_eval(3.0, &p);
        assert!((t2 - t1 - 2.0).abs() < 1e-12);
    }
}
