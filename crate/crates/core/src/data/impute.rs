//! Three-step missing-data imputation: bi-directional linear interpolation,
//! centered rolling average, and an abort signal for oversized gaps.

use super::TimeSeries;
use crate::error::ImputeAbort;

/// Default per-side limit for linear interpolation.
pub const DEFAULT_LINEAR_LIMIT: usize = 5;
/// Default cap on consecutive rolling-average fills.
pub const DEFAULT_ROLLING_LIMIT: usize = 20;
/// Default rolling-average window, in observations.
pub const DEFAULT_ROLLING_WINDOW: usize = 30;

/// Fills missing values of a real-valued series.
///
/// Step 1 interpolates linearly between the nearest known values on each
/// side of a gap, up to `linear_limit` fills per side (a gap no longer than
/// `2 * linear_limit` is filled completely). Step 2 fills what remains with
/// a centered rolling average over `rolling_window` observations, at most
/// `rolling_limit` consecutive fills. A gap too large for both steps
/// (longer than `2 * linear_limit + rolling_limit`, 30 with defaults)
/// returns [`ImputeAbort`]; the caller drops missing positions instead.
pub fn impute_missing(
    series: &TimeSeries,
    linear_limit: usize,
    rolling_limit: usize,
    rolling_window: usize,
) -> Result<TimeSeries, ImputeAbort> {
    let filled = impute_slice(series.values(), linear_limit, rolling_limit, rolling_window)?;
    Ok(series.with_values(filled))
}

/// Slice-level form of [`impute_missing`], reused for covariate columns.
pub fn impute_slice(
    values: &[f64],
    linear_limit: usize,
    rolling_limit: usize,
    rolling_window: usize,
) -> Result<Vec<f64>, ImputeAbort> {
    let n = values.len();
    let runs = missing_runs(values);
    if runs.is_empty() {
        return Ok(values.to_vec());
    }
    if values.iter().all(|v| v.is_nan()) {
        return Err(ImputeAbort { gap_len: n, at: 0 });
    }
    for &(start, len) in &runs {
        let interior = start > 0 && start + len < n;
        let cap = if interior {
            2 * linear_limit + rolling_limit
        } else {
            // edge gaps have a single anchor, so linear interpolation
            // cannot apply and the rolling step must cover the whole run
            rolling_limit
        };
        if len > cap {
            return Err(ImputeAbort {
                gap_len: len,
                at: start,
            });
        }
    }

    let mut out = values.to_vec();
    // Step 1: linear interpolation anchored on the nearest known values.
    for &(start, len) in &runs {
        if start == 0 || start + len == n {
            continue;
        }
        let ia = start - 1;
        let ib = start + len;
        let a = out[ia];
        let b = out[ib];
        let span = (ib - ia) as f64;
        let line = |i: usize| a + (b - a) * ((i - ia) as f64) / span;
        if len <= 2 * linear_limit {
            for i in start..start + len {
                out[i] = line(i);
            }
        } else {
            for i in start..start + linear_limit {
                out[i] = line(i);
            }
            for i in start + len - linear_limit..start + len {
                out[i] = line(i);
            }
        }
    }

    // Step 2: centered rolling average, synchronous passes so fills can
    // chain toward the middle of a run without order dependence.
    let half = rolling_window / 2;
    loop {
        let mut next = out.clone();
        let mut progressed = false;
        for i in 0..n {
            if !out[i].is_nan() {
                continue;
            }
            let lo = i.saturating_sub(half);
            let hi = (lo + rolling_window).min(n);
            let mut sum = 0.0;
            let mut count = 0usize;
            for &v in &out[lo..hi] {
                if !v.is_nan() {
                    sum += v;
                    count += 1;
                }
            }
            if count > 0 {
                next[i] = sum / count as f64;
                progressed = true;
            }
        }
        out = next;
        if !progressed {
            break;
        }
    }

    if let Some(pos) = out.iter().position(|v| v.is_nan()) {
        let (start, len) = runs
            .iter()
            .copied()
            .find(|&(s, l)| pos >= s && pos < s + l)
            .unwrap_or((pos, 1));
        return Err(ImputeAbort {
            gap_len: len,
            at: start,
        });
    }
    Ok(out)
}

/// Fills missing entries of an event indicator channel with zero: an
/// unrecorded event is assumed to not be happening.
pub fn impute_events(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|v| if v.is_nan() { 0.0 } else { *v })
        .collect()
}

fn missing_runs(values: &[f64]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < values.len() {
        if values[i].is_nan() {
            let start = i;
            while i < values.len() && values[i].is_nan() {
                i += 1;
            }
            runs.push((start, i - start));
        } else {
            i += 1;
        }
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    const M: f64 = f64::NAN;

    fn impute(values: &[f64]) -> Result<Vec<f64>, ImputeAbort> {
        impute_slice(
            values,
            DEFAULT_LINEAR_LIMIT,
            DEFAULT_ROLLING_LIMIT,
            DEFAULT_ROLLING_WINDOW,
        )
    }

    #[test]
    fn linear_fill_between_anchors() {
        let got = impute(&[1.0, M, M, 4.0]).unwrap();
        assert_eq!(got, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn complete_series_unchanged() {
        let v = vec![1.0, 2.0, 3.0];
        assert_eq!(impute(&v).unwrap(), v);
    }

    #[test]
    fn gap_of_31_aborts() {
        let mut v = vec![1.0; 40];
        for slot in v.iter_mut().skip(4).take(31) {
            *slot = M;
        }
        let err = impute(&v).unwrap_err();
        assert_eq!(err.gap_len, 31);
        assert_eq!(err.at, 4);
    }

    #[test]
    fn gap_of_30_fills_completely() {
        let mut v: Vec<f64> = (0..70).map(|i| i as f64).collect();
        for slot in v.iter_mut().skip(20).take(30) {
            *slot = M;
        }
        let got = impute(&v).unwrap();
        assert!(got.iter().all(|x| x.is_finite()));
        // outer 5 on each side follow the anchor line exactly
        assert!((got[20] - 20.0).abs() < 1e-12);
        assert!((got[49] - 49.0).abs() < 1e-12);
    }

    #[test]
    fn observed_values_never_altered() {
        let v = vec![3.0, M, 7.0, M, M, 2.0, 9.0];
        let got = impute(&v).unwrap();
        for (orig, filled) in v.iter().zip(&got) {
            if !orig.is_nan() {
                assert_eq!(orig, filled);
            }
        }
    }

    #[test]
    fn leading_gap_fills_by_rolling_average() {
        let mut v: Vec<f64> = vec![5.0; 30];
        v[0] = M;
        v[1] = M;
        let got = impute(&v).unwrap();
        assert_eq!(got[0], 5.0);
        assert_eq!(got[1], 5.0);
    }

    #[test]
    fn leading_gap_longer_than_rolling_limit_aborts() {
        let mut v: Vec<f64> = vec![5.0; 60];
        for slot in v.iter_mut().take(21) {
            *slot = M;
        }
        assert!(impute(&v).is_err());
    }

    #[test]
    fn all_missing_aborts() {
        assert!(impute(&[M, M, M]).is_err());
    }

    #[test]
    fn events_fill_with_zero() {
        assert_eq!(impute_events(&[1.0, M, 0.0]), vec![1.0, 0.0, 0.0]);
        assert_eq!(impute_events(&[M, M]), vec![0.0, 0.0]);
        assert_eq!(impute_events(&[1.0, 0.0]), vec![1.0, 0.0]);
    }
}
