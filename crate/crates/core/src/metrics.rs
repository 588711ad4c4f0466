//! Error measures: batch RMSE and the exponentially weighted squared error
//! that drives node ranking and cascade growth.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn rmse(errors: &[f64]) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mean_sq = errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64;
    Ok(mean_sq.sqrt())
}

/// Exponentially weighted mean squared error with start-up bias correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunningError {
    raw: f64,
    decay: f64,
    samples_seen: u64,
}

impl RunningError {
    pub fn new(decay: f64) -> Result<Self> {
        if !(decay > 0.0 && decay < 1.0) {
            return Err(Error::InvalidArgument(format!("decay {decay} outside (0, 1)")));
        }
        Ok(Self { raw: 0.0, decay, samples_seen: 0 })
    }

    pub fn update(&mut self, residual: f64) {
        self.raw = self.decay * self.raw + (1.0 - self.decay) * residual * residual;
        self.samples_seen += 1;
    }

    /// Bias-corrected estimate; zero before any sample.
    pub fn mse(&self) -> f64 {
        if self.samples_seen == 0 {
            return 0.0;
        }
        let weight = 1.0 - self.decay.powi(self.samples_seen.min(i32::MAX as u64) as i32);
        self.raw / weight
    }

    /// Uncorrected accumulator.
    pub fn raw(&self) -> f64 {
        self.raw
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn samples_seen(&self) -> u64 {
        self.samples_seen
    }

    pub fn reset(&mut self) {
        self.raw = 0.0;
        self.samples_seen = 0;
    }
}

/// One growth event: the training sample index at which the cascade reached
/// `depth` layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthEvent {
    pub sample: u64,
    pub depth: usize,
}

/// Train/test accuracy summary of a run. RMSE values are on the normalized
/// scale; the `_raw` fields are in the units of the input series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rmse_train: f64,
    pub rmse_test: f64,
    pub rmse_train_raw: f64,
    pub rmse_test_raw: f64,
    /// Prequential RMSE of the one-step-ahead predictions made while training.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rmse_online: Option<f64>,
    pub n_train: usize,
    pub n_test: usize,
    pub parameter_count: usize,
    pub depth: usize,
    pub growth_log: Vec<GrowthEvent>,
    /// Wall time of the training pass in seconds. Not reproducible; kept
    /// apart from the accuracy fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl EvalReport {
    /// The report with timing stripped, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self { wall_time: None, ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>, prec: usize| match v {
            Some(v) => format!("{v:.prec$}"),
            None => "-".to_string(),
        };
        writeln!(f, "{:<18}{:>12}{:>12}", "", "train", "test")?;
        writeln!(f, "{:<18}{:>12}{:>12}", "samples", self.n_train, self.n_test)?;
        writeln!(f, "{:<18}{:>12.6}{:>12.6}", "rmse (normalized)", self.rmse_train, self.rmse_test)?;
        writeln!(f, "{:<18}{:>12.6}{:>12.6}", "rmse (raw)", self.rmse_train_raw, self.rmse_test_raw)?;
        writeln!(f, "{:<18}{:>12}", "rmse (online)", opt(self.rmse_online, 6))?;
        writeln!(f, "{:<18}{:>12}", "parameters", self.parameter_count)?;
        writeln!(f, "{:<18}{:>12}", "cascade depth", self.depth)?;
        let growth = if self.growth_log.is_empty() {
            "none".to_string()
        } else {
            self.growth_log
                .iter()
                .map(|e| format!("{}@{}", e.depth, e.sample))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "{:<18}{:>12}", "growth", growth)?;
        write!(f, "{:<18}{:>12}", "time, s", opt(self.wall_time, 4))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rmse_cases() {
        assert_eq!(rmse(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(rmse(&[3.0, 4.0]).unwrap(), 12.5f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(rmse(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn first_corrected_read_is_square() {
        let mut t = RunningError::new(0.9).unwrap();
        t.update(0.3);
        assert_abs_diff_eq!(t.mse(), 0.09, epsilon = 1e-15);
    }

    #[test]
    fn constant_residual_fixed_point() {
        let mut t = RunningError::new(0.95).unwrap();
        for _ in 0..2000 {
            t.update(-0.7);
        }
        assert_abs_diff_eq!(t.mse(), 0.49, epsilon = 1e-12);
        assert_abs_diff_eq!(t.raw(), 0.49, epsilon = 1e-12);
    }

    #[test]
    fn zero_residuals_decay_monotonically() {
        let mut t = RunningError::new(0.9).unwrap();
        t.update(1.0);
        let mut last = t.raw();
        for _ in 0..100 {
            t.update(0.0);
            assert!(t.raw() <= last);
            last = t.raw();
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn rejects_bad_decay() {
        assert!(RunningError::new(1.0).is_err());
        assert!(RunningError::new(0.0).is_err());
    }

    #[test]
    fn converges_to_mean_square_of_iid_stream() {
        let decay = 0.99;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = RunningError::new(decay).unwrap();
        let steps = (10.0 / (1.0 - decay)) as usize;
        for _ in 0..steps {
            // uniform on [-1, 1]: mean square 1/3
            t.update(rng.gen_range(-1.0..=1.0));
        }
        let target = 1.0 / 3.0;
        assert!((t.mse() - target).abs() <= 0.1 * target, "{}", t.mse());
    }

    #[test]
    fn report_display_and_json() {
        let r = EvalReport {
            rmse_train: 0.1,
            rmse_test: 0.2,
            rmse_train_raw: 1.0,
            rmse_test_raw: 2.0,
            rmse_online: None,
            n_train: 10,
            n_test: 5,
            parameter_count: 24,
            depth: 0,
            growth_log: vec![],
            wall_time: Some(0.5),
        };
        let text = r.to_string();
        assert!(text.contains("growth") && text.contains("none"));
        let back = EvalReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.without_timing().wall_time, None);
    }

    proptest! {
        #[test]
        fn rmse_is_homogeneous(errs in proptest::collection::vec(-10.0f64..10.0, 1..50), k in -5.0f64..5.0) {
            let scaled: Vec<f64> = errs.iter().map(|e| k * e).collect();
            let lhs = rmse(&scaled).unwrap();
            let rhs = k.abs() * rmse(&errs).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }
    }
}
