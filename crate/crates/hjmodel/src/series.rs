//! Observed time series of outputs and prices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One observation: period index, output volume, output price, input prices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: usize,
    pub y: f64,
    pub p0: f64,
    pub p: Vec<f64>,
}

impl TimeSeriesRecord {
    pub fn new(t: usize, y: f64, p0: f64, p: Vec<f64>) -> Result<TimeSeriesRecord> {
        if t == 0 {
            return Err(Error::Validation("time index must be >= 1".into()));
        }
        if !y.is_finite() || y < 0.0 {
            return Err(Error::Validation(format!(
                "output y({t}) = {y} must be finite and nonnegative"
            )));
        }
        if !p0.is_finite() || p0 <= 0.0 {
            return Err(Error::Validation(format!(
                "output price p0({t}) = {p0} must be finite and positive"
            )));
        }
        if p.is_empty() {
            return Err(Error::Validation(format!("record {t} has no input prices")));
        }
        for (i, &pi) in p.iter().enumerate() {
            if !pi.is_finite() || pi <= 0.0 {
                return Err(Error::Validation(format!(
                    "input price p{}({t}) = {pi} must be finite and positive",
                    i + 1
                )));
            }
        }
        Ok(TimeSeriesRecord { t, y, p0, p })
    }
}

/// Input prices divided by the output price, one vector per record.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedPrices {
    phat: Vec<Vec<f64>>,
}

impl NormalizedPrices {
    pub fn from_records(records: &[TimeSeriesRecord]) -> Result<NormalizedPrices> {
        if records.is_empty() {
            return Err(Error::Validation("empty time series".into()));
        }
        let n = records[0].p.len();
        let mut phat = Vec::with_capacity(records.len());
        for r in records {
            if r.p.len() != n {
                return Err(Error::Validation(format!(
                    "record {} has {} input prices, expected {}",
                    r.t,
                    r.p.len(),
                    n
                )));
            }
            phat.push(r.p.iter().map(|&pi| pi / r.p0).collect());
        }
        Ok(NormalizedPrices { phat })
    }

    pub fn len(&self) -> usize {
        self.phat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phat.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.phat[0].len()
    }

    /// Normalized price vector of the 0-based record index.
    pub fn at(&self, idx: usize) -> &[f64] {
        &self.phat[idx]
    }
}

/// Validate a whole series: per-record invariants plus strictly increasing t.
pub fn validate_series(records: &[TimeSeriesRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Validation("empty time series".into()));
    }
    let n = records[0].p.len();
    for r in records {
        TimeSeriesRecord::new(r.t, r.y, r.p0, r.p.clone())?;
        if r.p.len() != n {
            return Err(Error::Validation(format!(
                "record {}: inconsistent input dimension",
                r.t
            )));
        }
    }
    for w in records.windows(2) {
        if w[1].t <= w[0].t {
            return Err(Error::Validation(format!(
                "time indices must be strictly increasing: {} then {}",
                w[0].t, w[1].t
            )));
        }
    }
    Ok(())
}

/// Output vector (y(1),...,y(T)) in record order.
pub fn output_vector(records: &[TimeSeriesRecord]) -> Vec<f64> {
    records.iter().map(|r| r.y).collect()
}
