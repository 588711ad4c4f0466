//! Command implementations shared by the binary and the tests.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use neofuzzy::data::{self, Column};
use neofuzzy::metrics::rmse;
use neofuzzy::{CascadeModel, EvalReport, Normalizer, SeriesFrame, Snapshot};

use crate::config::{DataSource, RunConfig};
use crate::error::{CliError, Result};

/// Writes `length` points of the synthetic plant as a single-column CSV.
pub fn generate(length: usize, out: &Path) -> Result<()> {
    if length == 0 {
        return Err(CliError::Config("length must be positive".into()));
    }
    let series = data::gen_synthetic(length);
    let mut text = String::with_capacity(length * 24);
    for v in series.values() {
        writeln!(text, "{v}").expect("write to string");
    }
    write_file(out, &text)
}

pub struct TrainOutcome {
    pub snapshot: Snapshot,
    pub report: EvalReport,
}

/// One online pass over the training samples, then a frozen evaluation on
/// both halves.
pub fn train(cfg: &RunConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let series = load_source(&cfg.data)?;
    let available = series.len().saturating_sub(cfg.lags);
    if cfg.train_count >= available {
        return Err(CliError::Config(format!(
            "train_count {} leaves no test samples out of {available}",
            cfg.train_count
        )));
    }

    let normalizer = data::fit_normalizer(&series, cfg.train_count + cfg.lags)
        .map_err(|e| CliError::from_engine("fitting normalizer", e))?;
    let scaled = normalizer.apply_all(series.values());
    let samples = data::lag_embed(&scaled, cfg.lags).map_err(CliError::Data)?;
    let (train_set, _) = data::split(samples, cfg.train_count).map_err(CliError::Data)?;

    let mut model = CascadeModel::new(
        cfg.lags,
        cfg.memberships,
        cfg.order,
        cfg.forgetting,
        cfg.growth.clone(),
        cfg.decay,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;

    let started = Instant::now();
    let mut online = Vec::with_capacity(train_set.len());
    for s in &train_set {
        let step = model.learn_step(&s.x, s.y).map_err(CliError::Data)?;
        online.push(s.y - step.prediction);
    }
    let elapsed = started.elapsed().as_secs_f64();

    let snapshot = Snapshot::new(model, normalizer);
    let mut report = evaluate_series(&snapshot, series.values(), cfg.train_count)?;
    report.rmse_online = Some(rmse(&online).map_err(CliError::Data)?);
    report.wall_time = Some(elapsed);
    Ok(TrainOutcome { snapshot, report })
}

/// Frozen-model accuracy on a raw series split after `train_count` samples.
pub fn evaluate_series(snapshot: &Snapshot, raw: &[f64], train_count: usize) -> Result<EvalReport> {
    let predictions = predict_series(snapshot, raw)?;
    if train_count == 0 || train_count >= predictions.len() {
        return Err(CliError::Config(format!(
            "train_count {train_count} must be between 1 and {}",
            predictions.len().saturating_sub(1)
        )));
    }
    let (train, test) = predictions.split_at(train_count);
    let norm = |rows: &[Prediction]| rmse(&rows.iter().map(|r| r.target - r.output).collect::<Vec<_>>());
    let raw_err = |rows: &[Prediction]| rmse(&rows.iter().map(Prediction::residual).collect::<Vec<_>>());
    let model = &snapshot.model;
    Ok(EvalReport {
        rmse_train: norm(train).map_err(CliError::Data)?,
        rmse_test: norm(test).map_err(CliError::Data)?,
        rmse_train_raw: raw_err(train).map_err(CliError::Data)?,
        rmse_test_raw: raw_err(test).map_err(CliError::Data)?,
        rmse_online: None,
        n_train: train.len(),
        n_test: test.len(),
        parameter_count: model.parameter_count(),
        depth: model.depth(),
        growth_log: model.growth_log().to_vec(),
        wall_time: None,
    })
}

/// One forward prediction against a known value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// Position of the predicted value in the raw series.
    pub index: usize,
    /// Raw value.
    pub actual: f64,
    /// Denormalized model output.
    pub predicted: f64,
    /// Normalized target and model output.
    pub target: f64,
    pub output: f64,
}

impl Prediction {
    pub fn residual(&self) -> f64 {
        self.actual - self.predicted
    }
}

/// Forward pass of a frozen model over every lag window of `raw`.
pub fn predict_series(snapshot: &Snapshot, raw: &[f64]) -> Result<Vec<Prediction>> {
    let lags = snapshot.lags();
    let normalizer: &Normalizer = &snapshot.normalizer;
    if raw.len() <= lags {
        return Ok(Vec::new());
    }
    let scaled = normalizer.apply_all(raw);
    let samples = data::lag_embed(&scaled, lags).map_err(CliError::Data)?;
    samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let output = snapshot.model.forward(&s.x).map_err(CliError::Data)?;
            Ok(Prediction {
                index: k + lags,
                actual: raw[k + lags],
                predicted: normalizer.invert(output),
                target: s.y,
                output,
            })
        })
        .collect()
}

/// Writes `index,actual,predicted,residual` rows for every lag window.
pub fn predict(model: &Path, data_path: &Path, column: &Column, out: &Path) -> Result<usize> {
    let snapshot = load_snapshot(model)?;
    let series = load_csv(data_path, column)?;
    let rows = predict_series(&snapshot, series.values())?;
    let mut text = String::from("index,actual,predicted,residual\n");
    for r in &rows {
        writeln!(text, "{},{},{},{}", r.index, r.actual, r.predicted, r.residual()).expect("write to string");
    }
    write_file(out, &text)?;
    Ok(rows.len())
}

/// Frozen-model report for a CSV series split after `train_count` samples.
pub fn eval(model: &Path, data_path: &Path, column: &Column, train_count: usize) -> Result<EvalReport> {
    let snapshot = load_snapshot(model)?;
    let series = load_csv(data_path, column)?;
    evaluate_series(&snapshot, series.values(), train_count)
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    Snapshot::load(path).map_err(|e| CliError::from_engine(format!("reading model {}", path.display()), e))
}

pub fn save_snapshot(snapshot: &Snapshot, path: &Path) -> Result<()> {
    let text = snapshot.to_json().map_err(CliError::Data)?;
    write_file(path, &text)
}

pub fn save_report(report: &EvalReport, path: &Path) -> Result<()> {
    let mut text = report.to_json().map_err(CliError::Data)?;
    text.push('\n');
    write_file(path, &text)
}

fn load_source(source: &DataSource) -> Result<SeriesFrame> {
    match source {
        DataSource::Synthetic { length } => Ok(data::gen_synthetic(*length)),
        DataSource::Csv { path, column } => load_csv(path, &column.parse().expect("infallible")),
    }
}

fn load_csv(path: &Path, column: &Column) -> Result<SeriesFrame> {
    data::load_csv(path, column).map_err(|e| CliError::from_engine(format!("reading {}", path.display()), e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}
