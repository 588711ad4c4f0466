//! Command-line driver for the neo-fuzzy cascade forecaster.

pub mod commands;
pub mod config;
mod error;

pub use config::{DataSource, RunConfig};
pub use error::{CliError, Result};
