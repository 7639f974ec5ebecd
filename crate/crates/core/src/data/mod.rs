//! Data model: regular-grid time series, missing-data imputation,
//! normalization and tabularization into training samples.
//!
//! Missing values are represented as `f64::NAN` throughout. Raw rows are
//! materialized onto a regular grid before any processing, so a missing
//! timestamp and a missing value are the same thing downstream.

mod csv_io;
mod impute;
mod normalize;
mod tabular;

pub use csv_io::{
    format_timestamp, parse_timestamp, read_csv, write_forecast_csv, write_plot_data,
};
pub use impute::{
    impute_events, impute_missing, impute_slice, DEFAULT_LINEAR_LIMIT, DEFAULT_ROLLING_LIMIT,
    DEFAULT_ROLLING_WINDOW,
};
pub use normalize::{normalize, normalize_slice, NormMode, NormState};
pub use tabular::{design_matrix, tabularize, DesignMatrix, SampleSet, SeasonalBlock};

use crate::error::{Error, Result};

/// Seconds per day; the seasonality time unit.
pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// A scalar series observed at a declared regular frequency.
///
/// Timestamps are epoch seconds, strictly increasing, spaced exactly
/// `freq` apart. Values may be `NAN` (missing).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    timestamps: Vec<i64>,
    values: Vec<f64>,
    freq: i64,
}

impl TimeSeries {
    /// Builds a series from an already-regular grid.
    pub fn from_regular(start: i64, freq: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData {
                required: 1,
                actual: 0,
            });
        }
        if freq <= 0 {
            return Err(Error::InvalidTimestamps(format!(
                "frequency must be positive, got {freq}"
            )));
        }
        let timestamps = (0..values.len() as i64).map(|i| start + i * freq).collect();
        Ok(Self {
            timestamps,
            values,
            freq,
        })
    }

    /// Builds a series from raw `(timestamp, value)` rows, inferring the
    /// frequency and materializing missing timestamps as `NAN`.
    pub fn from_rows(rows: &[(i64, f64)]) -> Result<Self> {
        let (timestamps, columns, freq) = materialize_grid(
            &rows.iter().map(|r| r.0).collect::<Vec<_>>(),
            &[rows.iter().map(|r| r.1).collect::<Vec<_>>()],
        )?;
        Ok(Self {
            timestamps,
            values: columns.into_iter().next().expect("one column in"),
            freq,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn freq(&self) -> i64 {
        self.freq
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_nan()).count()
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            timestamps: self.timestamps.clone(),
            values,
            freq: self.freq,
        }
    }
}

/// All ingested columns aligned on one grid: the target `y` plus any extra
/// columns referenced by the model config as regressors or events.
#[derive(Debug, Clone)]
pub struct Frame {
    pub timestamps: Vec<i64>,
    pub freq: i64,
    pub y: Vec<f64>,
    pub extras: Vec<(String, Vec<f64>)>,
}

impl Frame {
    /// Assembles a frame from raw per-row data, materializing the grid.
    /// Rows that do not land on a regular grid (calendar frequencies like
    /// monthly data) are accepted as-is, treated as consecutive, with the
    /// modal delta as the declared frequency.
    pub fn from_raw(
        timestamps: &[i64],
        y: Vec<f64>,
        extras: Vec<(String, Vec<f64>)>,
    ) -> Result<Self> {
        let mut columns = vec![y];
        let names: Vec<String> = extras.iter().map(|(n, _)| n.clone()).collect();
        columns.extend(extras.into_iter().map(|(_, v)| v));
        let (grid, cols, freq) = match materialize_grid(timestamps, &columns) {
            Ok(out) => out,
            Err(Error::InvalidTimestamps(msg)) if msg.contains("grid") => {
                // irregular spacing: keep rows, still require strict order
                let freq = infer_frequency(timestamps)?;
                (timestamps.to_vec(), columns, freq)
            }
            Err(e) => return Err(e),
        };
        let mut it = cols.into_iter();
        let y = it.next().expect("y column present");
        let extras = names.into_iter().zip(it).collect();
        Ok(Self {
            timestamps: grid,
            freq,
            y,
            extras,
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn extra(&self, name: &str) -> Option<&[f64]> {
        self.extras
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Removes every row whose `y` is missing; the fallback when imputation
    /// aborts. Remaining rows are treated as adjacent downstream.
    pub fn drop_missing_y(&self) -> Frame {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !self.y[i].is_nan()).collect();
        Frame {
            timestamps: keep.iter().map(|&i| self.timestamps[i]).collect(),
            freq: self.freq,
            y: keep.iter().map(|&i| self.y[i]).collect(),
            extras: self
                .extras
                .iter()
                .map(|(n, v)| (n.clone(), keep.iter().map(|&i| v[i]).collect()))
                .collect(),
        }
    }
}

/// Infers the sampling frequency as the modal timestamp delta, breaking
/// ties toward the smaller delta.
pub fn infer_frequency(timestamps: &[i64]) -> Result<i64> {
    if timestamps.len() < 2 {
        return Err(Error::InvalidTimestamps(
            "need at least two timestamps to infer a frequency".into(),
        ));
    }
    let mut deltas: Vec<i64> = timestamps.windows(2).map(|w| w[1] - w[0]).collect();
    if deltas.iter().any(|&d| d <= 0) {
        return Err(Error::InvalidTimestamps(
            "timestamps must be strictly increasing".into(),
        ));
    }
    deltas.sort_unstable();
    let mut best = (0usize, i64::MAX);
    let mut i = 0;
    while i < deltas.len() {
        let mut j = i;
        while j < deltas.len() && deltas[j] == deltas[i] {
            j += 1;
        }
        let count = j - i;
        // strict > keeps the smaller delta on ties since deltas are sorted
        if count > best.0 {
            best = (count, deltas[i]);
        }
        i = j;
    }
    Ok(best.1)
}

fn materialize_grid(
    timestamps: &[i64],
    columns: &[Vec<f64>],
) -> Result<(Vec<i64>, Vec<Vec<f64>>, i64)> {
    if timestamps.is_empty() {
        return Err(Error::InsufficientData {
            required: 1,
            actual: 0,
        });
    }
    for col in columns {
        if col.len() != timestamps.len() {
            return Err(Error::LengthMismatch {
                left: timestamps.len(),
                right: col.len(),
            });
        }
    }
    if timestamps.len() == 1 {
        let grid = vec![timestamps[0]];
        return Ok((grid, columns.to_vec(), i64::from(SECONDS_PER_DAY as i32)));
    }
    let freq = infer_frequency(timestamps)?;
    let start = timestamps[0];
    let end = timestamps[timestamps.len() - 1];
    let slots = ((end - start) / freq + 1) as usize;
    let mut grid = Vec::with_capacity(slots);
    let mut cols: Vec<Vec<f64>> = columns.iter().map(|_| vec![f64::NAN; slots]).collect();
    for i in 0..slots {
        grid.push(start + i as i64 * freq);
    }
    for (row, &ts) in timestamps.iter().enumerate() {
        let offset = ts - start;
        if offset % freq != 0 {
            return Err(Error::InvalidTimestamps(format!(
                "timestamp {ts} does not fall on the {freq}-second grid starting at {start}"
            )));
        }
        let slot = (offset / freq) as usize;
        for (c, col) in columns.iter().enumerate() {
            if !cols[c][slot].is_nan() {
                return Err(Error::InvalidTimestamps(format!(
                    "duplicate timestamp {ts}"
                )));
            }
            cols[c][slot] = col[row];
        }
    }
    Ok((grid, cols, freq))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infers_modal_frequency_with_smaller_tie() {
        // deltas 10, 10, 20, 20 -> tie broken toward 10
        let ts = [0, 10, 20, 40, 60];
        assert_eq!(infer_frequency(&ts).unwrap(), 10);
    }

    #[test]
    fn materializes_missing_timestamps_as_nan() {
        let s = TimeSeries::from_rows(&[(0, 1.0), (10, 2.0), (30, 4.0)]).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.freq(), 10);
        assert!(s.values()[2].is_nan());
        assert_eq!(s.missing_count(), 1);
    }

    #[test]
    fn rejects_off_grid_timestamp() {
        let err = TimeSeries::from_rows(&[(0, 1.0), (10, 2.0), (25, 3.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidTimestamps(_)));
    }

    #[test]
    fn rejects_unordered_timestamps() {
        assert!(infer_frequency(&[10, 0, 20]).is_err());
    }

    #[test]
    fn drop_missing_compacts_all_columns() {
        let frame = Frame::from_raw(
            &[0, 10, 20, 30],
            vec![1.0, f64::NAN, 3.0, 4.0],
            vec![("x".into(), vec![9.0, 8.0, 7.0, 6.0])],
        )
        .unwrap();
        let dropped = frame.drop_missing_y();
        assert_eq!(dropped.y, vec![1.0, 3.0, 4.0]);
        assert_eq!(dropped.extra("x").unwrap(), &[9.0, 7.0, 6.0]);
        assert_eq!(dropped.timestamps, vec![0, 20, 30]);
    }
}
