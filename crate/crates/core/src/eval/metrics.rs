//! Forecast error metrics: plain RMSE/MAE and the scaled MASE/RMSSE,
//! which divide by the naive one-step error of the training data.

use crate::error::{Error, Result};

/// Mean absolute error over paired observations; NaN actuals are skipped.
pub fn mae(y: &[f64], yhat: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (a, p) in y.iter().zip(yhat) {
        if !a.is_nan() && !p.is_nan() {
            sum += (a - p).abs();
            n += 1;
        }
    }
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Root mean squared error over paired observations.
pub fn rmse(y: &[f64], yhat: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (a, p) in y.iter().zip(yhat) {
        if !a.is_nan() && !p.is_nan() {
            sum += (a - p) * (a - p);
            n += 1;
        }
    }
    if n == 0 {
        f64::NAN
    } else {
        (sum / n as f64).sqrt()
    }
}

/// Mean absolute first difference of the training series, the naive
/// one-step error. Pairs with a missing side are skipped.
fn naive_abs_diff(train_y: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for w in train_y.windows(2) {
        if !w[0].is_nan() && !w[1].is_nan() {
            sum += (w[1] - w[0]).abs();
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::InsufficientData {
            required: 2,
            actual: train_y.len().min(1),
        });
    }
    let d = sum / n as f64;
    if d == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(d)
}

fn naive_sq_diff(train_y: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for w in train_y.windows(2) {
        if !w[0].is_nan() && !w[1].is_nan() {
            sum += (w[1] - w[0]) * (w[1] - w[0]);
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::InsufficientData {
            required: 2,
            actual: train_y.len().min(1),
        });
    }
    let d = sum / n as f64;
    if d == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(d)
}

/// Mean absolute scaled error. For multi-step forecasts the numerator
/// averages over all horizon steps of all origins (pass them flattened).
pub fn mase(train_y: &[f64], test_y: &[f64], test_yhat: &[f64]) -> Result<f64> {
    if test_y.len() != test_yhat.len() {
        return Err(Error::LengthMismatch {
            left: test_y.len(),
            right: test_yhat.len(),
        });
    }
    Ok(mae(test_y, test_yhat) / naive_abs_diff(train_y)?)
}

/// Root mean squared scaled error, the squared analogue of MASE.
pub fn rmsse(train_y: &[f64], test_y: &[f64], test_yhat: &[f64]) -> Result<f64> {
    if test_y.len() != test_yhat.len() {
        return Err(Error::LengthMismatch {
            left: test_y.len(),
            right: test_yhat.len(),
        });
    }
    Ok(rmse(test_y, test_yhat) / naive_sq_diff(train_y)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_forecast_scores_zero() {
        let train = [1.0, 2.0, 3.0];
        let test = [4.0, 5.0];
        assert_eq!(mase(&train, &test, &test).unwrap(), 0.0);
        assert_eq!(rmsse(&train, &test, &test).unwrap(), 0.0);
    }

    #[test]
    fn mase_hand_example() {
        // numerator (1+1)/2 = 1, denominator (1+1+1)/3 = 1
        let got = mase(&[1.0, 2.0, 3.0, 4.0], &[5.0, 6.0], &[6.0, 7.0]).unwrap();
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rmsse_hand_example() {
        // train diffs all 1 -> denominator 1; constant error 1 -> 1.0
        let got = rmsse(&[0.0, 1.0, 0.0, 1.0], &[2.0, 3.0], &[3.0, 4.0]).unwrap();
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scale_invariance() {
        let train = [1.0, 3.0, 2.0, 5.0, 4.0];
        let test = [6.0, 7.0, 5.0];
        let yhat = [5.5, 7.5, 6.0];
        let m1 = mase(&train, &test, &yhat).unwrap();
        let r1 = rmsse(&train, &test, &yhat).unwrap();
        let s = 37.5;
        let scale = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x * s).collect() };
        let m2 = mase(&scale(&train), &scale(&test), &scale(&yhat)).unwrap();
        let r2 = rmsse(&scale(&train), &scale(&test), &scale(&yhat)).unwrap();
        assert!((m1 - m2).abs() < 1e-12);
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn constant_train_is_zero_denominator() {
        assert!(matches!(
            mase(&[2.0, 2.0, 2.0], &[1.0], &[2.0]),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn naive_one_step_on_random_walk_is_near_one() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let n = 5000;
        let mut y = vec![0.0];
        for _ in 1..n {
            let step: f64 = rng.random_range(-1.0..1.0);
            y.push(y.last().unwrap() + step);
        }
        let split = 4000;
        let (train, test) = y.split_at(split);
        // naive forecast: previous observed value
        let yhat: Vec<f64> = y[split - 1..n - 1].to_vec();
        let m = mase(train, test, &yhat).unwrap();
        assert!((m - 1.0).abs() < 0.1, "mase {m}");
    }
}
