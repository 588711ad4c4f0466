//! Series generation, CSV ingestion, scaling and lag embedding.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named scalar series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFrame {
    name: String,
    values: Vec<f64>,
}

impl SeriesFrame {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("value {i} is not finite")));
        }
        Ok(Self { name: name.into(), values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Memory of the synthetic plant.
pub const SYNTHETIC_ORDER: usize = 10;

/// Nonlinear autoregressive plant driven by a sine:
///
/// ```text
/// y_t = Σ_{i=1..10} y_{t-i} / (1 + Σ_{i=1..10} y_{t-i}²) + u_{t-1},  u_t = sin(2πt/20)
/// ```
///
/// with `y_1 = … = y_10 = 0`. Element `k` of the result is `y_{k+1}`.
pub fn gen_synthetic(length: usize) -> SeriesFrame {
    let m = SYNTHETIC_ORDER;
    let mut y = vec![0.0; length];
    for idx in m..length {
        let t = idx + 1;
        let history = &y[idx - m..idx];
        let sum: f64 = history.iter().sum();
        let sum_sq: f64 = history.iter().map(|v| v * v).sum();
        let u_prev = (2.0 * PI * (t - 1) as f64 / 20.0).sin();
        y[idx] = sum / (1.0 + sum_sq) + u_prev;
    }
    SeriesFrame { name: "synthetic".into(), values: y }
}

/// Which CSV column holds the series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Index(usize),
    Name(String),
}

impl Default for Column {
    fn default() -> Self {
        Column::Index(0)
    }
}

impl std::str::FromStr for Column {
    type Err = std::convert::Infallible;

    /// Digits select by position, anything else by header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        })
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse { line, message: format!("{kind:?}") },
    }
}

/// Reads one numeric column from a comma-separated file.
///
/// Selecting by name requires a header row. Selecting by index accepts an
/// optional header: a non-numeric first row is skipped.
pub fn load_csv(path: impl AsRef<Path>, column: &Column) -> Result<SeriesFrame> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut values = Vec::new();
    let mut col = match column {
        Column::Index(i) => Some(*i),
        Column::Name(_) => None,
    };
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        if first {
            first = false;
            match column {
                Column::Name(name) => {
                    let idx = record.iter().position(|c| c == name).ok_or_else(|| Error::Parse {
                        line,
                        message: format!("no column named {name:?} in header"),
                    })?;
                    col = Some(idx);
                    continue;
                }
                Column::Index(i) => {
                    if record.get(*i).is_some_and(|c| c.parse::<f64>().is_err()) {
                        continue;
                    }
                }
            }
        }
        let idx = col.expect("column resolved");
        let cell = record.get(idx).ok_or_else(|| Error::Parse {
            line,
            message: format!("row has no column {idx}"),
        })?;
        let value: f64 = cell.parse().map_err(|_| Error::Parse {
            line,
            message: format!("cannot parse {cell:?} as a number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse { line, message: format!("non-finite value {cell:?}") });
        }
        values.push(value);
    }
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("series").to_string();
    Ok(SeriesFrame { name, values })
}

/// Affine map of `[lo, hi]` onto `[0, 1]`, clipping values outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    lo: f64,
    hi: f64,
}

impl Normalizer {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument("normalizer bounds must be finite".into()));
        }
        if lo >= hi {
            return Err(Error::DegenerateRange(lo));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn apply(&self, v: f64) -> f64 {
        ((v - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }

    pub fn invert(&self, u: f64) -> f64 {
        self.lo + u * (self.hi - self.lo)
    }

    pub fn apply_all(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&v| self.apply(v)).collect()
    }
}

/// Fits the normalizer on the first `split_point` values only.
pub fn fit_normalizer(frame: &SeriesFrame, split_point: usize) -> Result<Normalizer> {
    if split_point < 2 {
        return Err(Error::InvalidArgument(format!("split point {split_point} is below 2")));
    }
    if split_point > frame.len() {
        return Err(Error::InvalidArgument(format!(
            "split point {split_point} exceeds series length {}",
            frame.len()
        )));
    }
    let prefix = &frame.values()[..split_point];
    let lo = prefix.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = prefix.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Normalizer::new(lo, hi)
}

/// Input vector of the most recent `n` values (newest first) and the value
/// that follows them.
#[derive(Debug, Clone, PartialEq)]
pub struct LagSample {
    pub x: Vec<f64>,
    pub y: f64,
}

/// Sample `k` has `x = (v[k-1], …, v[k-n])` and `y = v[k]`, for
/// `k = n .. len`; `len - n` samples in total.
pub fn lag_embed(values: &[f64], lags: usize) -> Result<Vec<LagSample>> {
    if lags == 0 {
        return Err(Error::InvalidArgument("at least one lag is required".into()));
    }
    if values.len() <= lags {
        return Err(Error::SeriesTooShort { len: values.len(), lags });
    }
    Ok(values
        .windows(lags + 1)
        .map(|w| LagSample { x: w[..lags].iter().rev().copied().collect(), y: w[lags] })
        .collect())
}

/// Splits samples into the first `train_count` and the rest.
pub fn split<T>(mut samples: Vec<T>, train_count: usize) -> Result<(Vec<T>, Vec<T>)> {
    if train_count == 0 {
        return Err(Error::InvalidArgument("train_count must be positive".into()));
    }
    if train_count > samples.len() {
        return Err(Error::InvalidArgument(format!(
            "train_count {train_count} exceeds {} samples",
            samples.len()
        )));
    }
    let test = samples.split_off(train_count);
    Ok((samples, test))
}
