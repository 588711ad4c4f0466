//! Run configuration: a TOML file plus `key=value` overrides.

use std::path::{Path, PathBuf};

use neofuzzy::data::Column;
use neofuzzy::GrowthPolicy;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum DataSource {
    Synthetic {
        #[serde(default = "default_length")]
        length: usize,
    },
    Csv {
        path: PathBuf,
        #[serde(default = "default_column")]
        column: String,
    },
}

fn default_length() -> usize {
    2500
}

fn default_column() -> String {
    "0".into()
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::Synthetic { length: default_length() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Lagged inputs per sample.
    pub lags: usize,
    /// Membership functions per synapse.
    pub memberships: usize,
    /// B-spline order.
    pub order: usize,
    pub forgetting: f64,
    /// Decay of the running error trackers.
    pub decay: f64,
    /// Seed for randomized utilities; training itself is deterministic.
    pub seed: u64,
    /// Lag samples used for training; the remainder is the test set.
    pub train_count: usize,
    pub growth: GrowthPolicy,
    pub data: DataSource,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lags: 3,
            memberships: 4,
            order: 2,
            forgetting: 0.9,
            decay: 0.99,
            seed: 0,
            train_count: 2000,
            growth: GrowthPolicy::default(),
            data: DataSource::default(),
        }
    }
}

impl RunConfig {
    /// Parses TOML text and applies `key=value` overrides (dotted keys reach
    /// into tables, e.g. `growth.warmup=200`).
    pub fn from_toml(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table =
            text.parse().map_err(|e| CliError::Config(format!("invalid TOML: {e}")))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let cfg: RunConfig = table
            .try_into()
            .map_err(|e| CliError::Config(format!("invalid configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading config {}", path.display()), e))?;
        Self::from_toml(&text, overrides)
    }

    pub fn column(&self) -> Option<Column> {
        match &self.data {
            DataSource::Csv { column, .. } => Some(column.parse().expect("infallible")),
            DataSource::Synthetic { .. } => None,
        }
    }

    /// Checks every module precondition that does not depend on the data.
    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(CliError::Config(m));
        if self.lags < 2 {
            return cfg(format!("lags must be at least 2, got {}", self.lags));
        }
        if self.order == 0 || self.memberships < self.order {
            return cfg(format!(
                "need 1 <= order <= memberships, got order {} and memberships {}",
                self.order, self.memberships
            ));
        }
        if !(0.0..=1.0).contains(&self.forgetting) {
            return cfg(format!("forgetting {} outside [0, 1]", self.forgetting));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return cfg(format!("decay {} outside (0, 1)", self.decay));
        }
        if self.train_count == 0 {
            return cfg("train_count must be positive".into());
        }
        self.growth
            .validate(self.lags)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let DataSource::Synthetic { length } = self.data {
            if length <= self.lags + self.train_count {
                return cfg(format!(
                    "synthetic length {length} leaves no test samples after {} lags and {} training samples",
                    self.lags, self.train_count
                ));
            }
        }
        Ok(())
    }
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {item:?} is not key=value")))?;
    let value = parse_value(raw.trim());
    let mut path: Vec<&str> = key.trim().split('.').collect();
    let leaf = path.pop().filter(|k| !k.is_empty()).ok_or_else(|| {
        CliError::Config(format!("override {item:?} has an empty key"))
    })?;
    let mut cursor = table;
    for part in path {
        let entry = cursor
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cursor = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("{part} is not a table")))?;
    }
    cursor.insert(leaf.to_string(), value);
    Ok(())
}

/// TOML literal if it parses as one, otherwise a bare string.
fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
