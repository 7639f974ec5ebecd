//! Event and holiday features: binary indicator columns with per-day
//! window expansion, plus a bundled country-holiday table.

use super::ComponentMode;
use crate::data::SECONDS_PER_DAY;
use crate::error::{Error, Result};
use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

/// One configured event: occurrence dates and a `[lower, upper]` day window.
/// Window expansion creates `upper - lower + 1` independent binary variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSpec {
    pub name: String,
    /// Occurrence dates as days since the Unix epoch.
    pub occurrence_days: Vec<i64>,
    /// Window start in days relative to the occurrence (<= 0).
    pub window_lower: i64,
    /// Window end in days relative to the occurrence (>= 0).
    pub window_upper: i64,
    pub mode: ComponentMode,
}

impl EventSpec {
    pub fn column_count(&self) -> usize {
        (self.window_upper - self.window_lower + 1) as usize
    }
}

/// Column metadata for the expanded event matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EventColumn {
    pub event_index: usize,
    pub offset: i64,
}

/// Binary feature matrix for all events, stored row-major per timestamp.
#[derive(Debug, Clone)]
pub struct EventMatrix {
    pub columns: Vec<EventColumn>,
    /// `rows * columns.len()` values in row-major order.
    pub data: Vec<f64>,
    pub rows: usize,
}

impl EventMatrix {
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, t: usize) -> &[f64] {
        let w = self.width();
        &self.data[t * w..(t + 1) * w]
    }
}

/// Builds one binary column per event per window offset: an entry is 1 iff
/// the timestamp's date equals an occurrence date plus the offset.
pub fn event_features(timestamps: &[i64], events: &[EventSpec]) -> EventMatrix {
    let mut columns = Vec::new();
    for (event_index, e) in events.iter().enumerate() {
        for offset in e.window_lower..=e.window_upper {
            columns.push(EventColumn {
                event_index,
                offset,
            });
        }
    }
    let width = columns.len();
    let mut data = vec![0.0; timestamps.len() * width];
    for (row, &ts) in timestamps.iter().enumerate() {
        let day = ts.div_euclid(SECONDS_PER_DAY as i64);
        for (c, col) in columns.iter().enumerate() {
            let e = &events[col.event_index];
            // 1 iff day == occurrence + offset
            if e.occurrence_days.contains(&(day - col.offset)) {
                data[row * width + c] = 1.0;
            }
        }
    }
    EventMatrix {
        columns,
        data,
        rows: timestamps.len(),
    }
}

const HOLIDAY_TABLE: &str = include_str!("../../data/holidays.tsv");

#[derive(Debug, Clone, PartialEq)]
enum HolidayRule {
    Fixed {
        month: u32,
        day: u32,
    },
    NthWeekday {
        month: u32,
        n: i32,
        weekday: Weekday,
    },
    EasterOffset(i64),
}

/// Returns the named holidays of a country with their occurrence dates over
/// the inclusive year range, one entry per holiday name.
pub fn country_holidays(
    country: &str,
    year_from: i32,
    year_to: i32,
) -> Result<Vec<(String, Vec<NaiveDate>)>> {
    let mut out: Vec<(String, Vec<NaiveDate>)> = Vec::new();
    for line in HOLIDAY_TABLE.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(c), Some(name), Some(rule)) = (parts.next(), parts.next(), parts.next()) else {
            continue;
        };
        if c != country {
            continue;
        }
        let rule = parse_rule(rule.trim())?;
        let dates: Vec<NaiveDate> = (year_from..=year_to)
            .filter_map(|y| rule_date(&rule, y))
            .collect();
        out.push((name.to_string(), dates));
    }
    if out.is_empty() {
        return Err(Error::UnknownCountry(country.to_string()));
    }
    Ok(out)
}

/// Lists the country codes covered by the bundled table.
pub fn known_countries() -> Vec<String> {
    let mut seen = Vec::new();
    for line in HOLIDAY_TABLE.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if let Some(c) = line.split('\t').next() {
            if !seen.iter().any(|s| s == c) {
                seen.push(c.to_string());
            }
        }
    }
    seen
}

fn parse_rule(s: &str) -> Result<HolidayRule> {
    let bad = || Error::Config(format!("malformed holiday rule '{s}'"));
    if let Some(rest) = s.strip_prefix("fixed:") {
        let (m, d) = rest.split_once('-').ok_or_else(bad)?;
        return Ok(HolidayRule::Fixed {
            month: m.parse().map_err(|_| bad())?,
            day: d.parse().map_err(|_| bad())?,
        });
    }
    if let Some(rest) = s.strip_prefix("nth:") {
        let mut it = rest.split(':');
        let month = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let n = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let weekday = match it.next().ok_or_else(bad)? {
            "Mon" => Weekday::Mon,
            "Tue" => Weekday::Tue,
            "Wed" => Weekday::Wed,
            "Thu" => Weekday::Thu,
            "Fri" => Weekday::Fri,
            "Sat" => Weekday::Sat,
            "Sun" => Weekday::Sun,
            _ => return Err(bad()),
        };
        return Ok(HolidayRule::NthWeekday { month, n, weekday });
    }
    if let Some(rest) = s.strip_prefix("easter:") {
        return Ok(HolidayRule::EasterOffset(rest.parse().map_err(|_| bad())?));
    }
    Err(bad())
}

fn rule_date(rule: &HolidayRule, year: i32) -> Option<NaiveDate> {
    match rule {
        HolidayRule::Fixed { month, day } => NaiveDate::from_ymd_opt(year, *month, *day),
        HolidayRule::NthWeekday { month, n, weekday } => nth_weekday(year, *month, *n, *weekday),
        HolidayRule::EasterOffset(offset) => {
            Some(easter_sunday(year) + chrono::Duration::days(*offset))
        }
    }
}

fn nth_weekday(year: i32, month: u32, n: i32, weekday: Weekday) -> Option<NaiveDate> {
    if n > 0 {
        let first = NaiveDate::from_ymd_opt(year, month, 1)?;
        let shift = (7 + weekday.num_days_from_monday() as i64
            - first.weekday().num_days_from_monday() as i64)
            % 7;
        let date = first + chrono::Duration::days(shift + 7 * (n as i64 - 1));
        (date.month() == month).then_some(date)
    } else {
        let last = if month == 12 {
            NaiveDate::from_ymd_opt(year + 1, 1, 1)?
        } else {
            NaiveDate::from_ymd_opt(year, month + 1, 1)?
        }
        .pred_opt()?;
        let shift = (7 + last.weekday().num_days_from_monday() as i64
            - weekday.num_days_from_monday() as i64)
            % 7;
        let date = last - chrono::Duration::days(shift + 7 * ((-n) as i64 - 1));
        (date.month() == month).then_some(date)
    }
}

/// Gregorian Easter Sunday (anonymous computus).
fn easter_sunday(year: i32) -> NaiveDate {
    let a = year % 19;
    let b = year / 100;
    let c = year % 100;
    let d = b / 4;
    let e = b % 4;
    let f = (b + 8) / 25;
    let g = (b - f + 1) / 3;
    let h = (19 * a + b - d - g + 15) % 30;
    let i = c / 4;
    let k = c % 4;
    let l = (32 + 2 * e + 2 * i - h - k) % 7;
    let m = (a + 11 * h + 22 * l) / 451;
    let month = (h + l - 7 * m + 114) / 31;
    let day = (h + l - 7 * m + 114) % 31 + 1;
    NaiveDate::from_ymd_opt(year, month as u32, day as u32).expect("computus yields a valid date")
}

/// Converts a calendar date to days since the Unix epoch.
pub fn date_to_epoch_days(date: NaiveDate) -> i64 {
    date.signed_duration_since(NaiveDate::from_ymd_opt(1970, 1, 1).unwrap())
        .num_days()
}
