//! Versioned JSON snapshots of a trained model and its input scaling.
//!
//! Floats are written in shortest round-trip form, so save → load → save
//! reproduces the document byte for byte and the restored model predicts
//! bit-identically.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cascade::CascadeModel;
use crate::data::Normalizer;
use crate::error::{Error, Result};

pub const FORMAT: &str = "neofuzzy-cascade";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub format: String,
    pub version: u32,
    pub normalizer: Normalizer,
    pub model: CascadeModel,
}

#[derive(Deserialize)]
struct Header {
    format: Option<String>,
    version: Option<u32>,
}

impl Snapshot {
    pub fn new(model: CascadeModel, normalizer: Normalizer) -> Self {
        Self { format: FORMAT.into(), version: VERSION, normalizer, model }
    }

    /// Number of lags the model was trained on.
    pub fn lags(&self) -> usize {
        self.model.input_dim()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let header: Header = serde_json::from_str(text)?;
        match (header.format.as_deref(), header.version) {
            (Some(FORMAT), Some(VERSION)) => {}
            (Some(FORMAT), Some(v)) => {
                return Err(Error::VersionMismatch(format!("version {v}, expected {VERSION}")))
            }
            (f, _) => {
                return Err(Error::VersionMismatch(format!(
                    "format {:?}, expected {FORMAT:?}",
                    f.unwrap_or("<missing>")
                )))
            }
        }
        let snap: Snapshot = serde_json::from_str(text)?;
        snap.model.validate()?;
        Normalizer::new(snap.normalizer.lo(), snap.normalizer.hi())?;
        Ok(snap)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
