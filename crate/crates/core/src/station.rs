//! Per-station temperature series in a two-column CSV.
//!
//! ```text
//! timestamp,temperature
//! 1950-01-01T00:00:00Z,-3.2
//! 1950-01-01T03:00:00Z,
//! ```
//!
//! Time is measured in years of 31 557 600 s from 1950-01-01T00:00:00Z.
//! Rows with an empty temperature are dropped.

use std::io::Read;
use std::path::Path;

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};
use crate::model::{DataPoint, Dataset};

/// Seconds in one unit of time.
pub const SECONDS_PER_YEAR: f64 = 31_557_600.0;

/// Unix timestamp of 1950-01-01T00:00:00Z.
pub const EPOCH_1950_UNIX: i64 = -631_152_000;

/// Series with fewer remaining samples are rejected.
pub const MIN_SERIES_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct StationSeries {
    pub dataset: Dataset,
    pub dropped_nulls: usize,
}

/// Years since 1950-01-01T00:00:00Z.
pub fn years_since_1950(t: DateTime<Utc>) -> f64 {
    let secs = t.timestamp() - EPOCH_1950_UNIX;
    (secs as f64 + f64::from(t.timestamp_subsec_nanos()) * 1e-9) / SECONDS_PER_YEAR
}

pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(s.trim())
        .ok()
        .map(|t| t.with_timezone(&Utc))
}

pub fn read_station_csv(path: impl AsRef<Path>) -> Result<StationSeries> {
    parse_station_csv(std::fs::File::open(path)?)
}

pub fn parse_station_csv(reader: impl Read) -> Result<StationSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut points = Vec::new();
    let mut dropped = 0;
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        let ts = record.get(0).unwrap_or("");
        let temp = record.get(1);
        if i == 0 && ts.eq_ignore_ascii_case("timestamp") {
            continue;
        }
        if record.len() == 1 && ts.is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let t = parse_timestamp(ts).ok_or_else(|| Error::Parse {
            line,
            message: format!("malformed timestamp `{ts}`"),
        })?;
        let temp = temp.unwrap_or("");
        if temp.is_empty() {
            dropped += 1;
            continue;
        }
        let y: f64 = temp.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| Error::Parse {
            line,
            message: format!("malformed temperature `{temp}`"),
        })?;
        points.push(DataPoint::new(years_since_1950(t), y));
    }
    if points.len() < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            kept: points.len(),
            dropped,
            min: MIN_SERIES_LEN,
        });
    }
    Ok(StationSeries {
        dataset: Dataset::new(points)?,
        dropped_nulls: dropped,
    })
}
