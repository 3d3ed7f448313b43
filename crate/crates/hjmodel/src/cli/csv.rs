//! CSV ingestion for time series: header `t,y,p0,p1,p2`, decimal dot, UTF-8.

use crate::error::{Error, Result};
use crate::series::{validate_series, TimeSeriesRecord};

/// Parse a whole CSV document into validated records sorted by t.
pub fn parse_series_csv(content: &str) -> Result<Vec<TimeSeriesRecord>> {
    let mut lines = content.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::Validation("empty CSV".into()));
    };
    if header.trim() != "t,y,p0,p1,p2" {
        return Err(Error::Validation(format!(
            "line 1: expected header `t,y,p0,p1,p2`, got `{}`",
            header.trim()
        )));
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::Validation(format!(
                "line {line_no}: expected 5 fields, got {}",
                fields.len()
            )));
        }
        let t: usize = fields[0].parse().map_err(|_| {
            Error::Validation(format!("line {line_no}: bad time index `{}`", fields[0]))
        })?;
        let mut nums = [0.0f64; 4];
        for (slot, field) in nums.iter_mut().zip(&fields[1..]) {
            *slot = field.parse().map_err(|_| {
                Error::Validation(format!("line {line_no}: bad number `{field}`"))
            })?;
        }
        let record = TimeSeriesRecord::new(t, nums[0], nums[1], vec![nums[2], nums[3]])
            .map_err(|e| Error::Validation(format!("line {line_no}: {e}")))?;
        records.push(record);
    }
    records.sort_by_key(|r| r.t);
    validate_series(&records)?;
    Ok(records)
}

/// Load and parse a CSV file.
pub fn ingest_csv(path: &std::path::Path) -> Result<Vec<TimeSeriesRecord>> {
    let content = std::fs::read_to_string(path)?;
    parse_series_csv(&content)
}
