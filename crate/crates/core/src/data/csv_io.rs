//! CSV ingestion and output.
//!
//! Input needs header columns `ds` (ISO-8601 timestamp) and `y` (decimal);
//! extra columns become candidate regressors or events referenced by name.
//! Missing values are empty cells or `NaN`.

use super::Frame;
use crate::error::{Error, Result};
use crate::model::predict::ForecastFrame;
use chrono::{DateTime, NaiveDate, NaiveDateTime};
use std::path::Path;

/// Parses an ISO-8601 timestamp (date, datetime, or datetime with offset)
/// into epoch seconds.
pub fn parse_timestamp(s: &str) -> Result<i64> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp());
    }
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S"] {
        if let Ok(ndt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(ndt.and_utc().timestamp());
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d
            .and_hms_opt(0, 0, 0)
            .expect("midnight")
            .and_utc()
            .timestamp());
    }
    Err(Error::Csv(format!("unparseable timestamp '{s}'")))
}

/// Formats epoch seconds back to `YYYY-MM-DD HH:MM:SS`.
pub fn format_timestamp(secs: i64) -> String {
    DateTime::from_timestamp(secs, 0)
        .map(|dt| dt.format("%Y-%m-%d %H:%M:%S").to_string())
        .unwrap_or_else(|| secs.to_string())
}

fn parse_value(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("nan") {
        return Ok(f64::NAN);
    }
    s.parse::<f64>()
        .map_err(|_| Error::Csv(format!("unparseable number '{s}'")))
}

/// Reads a `ds,y[,extra...]` CSV into a frame on a materialized grid.
pub fn read_csv(path: &Path) -> Result<Frame> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let ds_idx = headers
        .iter()
        .position(|h| h == "ds")
        .ok_or_else(|| Error::Csv("missing required column 'ds'".into()))?;
    let y_idx = headers
        .iter()
        .position(|h| h == "y")
        .ok_or_else(|| Error::Csv("missing required column 'y'".into()))?;
    let extra_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ds_idx && *i != y_idx)
        .map(|(i, h)| (i, h.clone()))
        .collect();

    let mut timestamps = Vec::new();
    let mut y = Vec::new();
    let mut extras: Vec<(String, Vec<f64>)> = extra_cols
        .iter()
        .map(|(_, name)| (name.clone(), Vec::new()))
        .collect();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv(format!("row {}: {e}", row + 2)))?;
        let ds = record
            .get(ds_idx)
            .ok_or_else(|| Error::Csv(format!("row {}: missing ds", row + 2)))?;
        timestamps.push(parse_timestamp(ds)?);
        y.push(parse_value(record.get(y_idx).unwrap_or(""))?);
        for (slot, (col, _)) in extras.iter_mut().zip(&extra_cols) {
            slot.1.push(parse_value(record.get(*col).unwrap_or(""))?);
        }
    }
    if timestamps.is_empty() {
        return Err(Error::InsufficientData {
            required: 1,
            actual: 0,
        });
    }
    Frame::from_raw(&timestamps, y, extras)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes a forecast frame as CSV: `ds,y,yhat1..h` plus, when `decompose`
/// is set, one column per component. Nulls are empty cells.
pub fn write_forecast_csv(frame: &ForecastFrame, decompose: bool, path: &Path) -> Result<()> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
    let mut header = vec!["ds".to_string(), "y".to_string()];
    for i in 1..=frame.horizon() {
        header.push(format!("yhat{i}"));
    }
    if decompose {
        for c in &frame.components {
            header.push(c.name.clone());
        }
    }
    writer
        .write_record(&header)
        .map_err(|e| Error::Csv(e.to_string()))?;
    for row in 0..frame.len() {
        let mut record = vec![
            format_timestamp(frame.timestamps[row]),
            cell(frame.actual[row]),
        ];
        for age in &frame.yhat {
            record.push(cell(age[row]));
        }
        if decompose {
            for c in &frame.components {
                record.push(cell(c.values[row]));
            }
        }
        writer
            .write_record(&record)
            .map_err(|e| Error::Csv(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes the `(timestamp, component, value)` long-format companion file
/// for external plotting. Null cells are skipped.
pub fn write_plot_data(frame: &ForecastFrame, path: &Path) -> Result<()> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
    writer
        .write_record(["ds", "component", "value"])
        .map_err(|e| Error::Csv(e.to_string()))?;
    let mut emit = |name: &str, values: &[Option<f64>]| -> Result<()> {
        for (row, v) in values.iter().enumerate() {
            if let Some(x) = v {
                writer
                    .write_record([
                        format_timestamp(frame.timestamps[row]).as_str(),
                        name,
                        x.to_string().as_str(),
                    ])
                    .map_err(|e| Error::Csv(e.to_string()))?;
            }
        }
        Ok(())
    };
    for (i, age) in frame.yhat.iter().enumerate() {
        emit(&format!("yhat{}", i + 1), age)?;
    }
    for c in &frame.components {
        emit(&c.name, &c.values)?;
    }
    writer.flush()?;
    Ok(())
}
