//! Online time-series forecasting with an evolving cascade of neo-fuzzy neurons.
//!
//! Each neuron has two nonlinear synapses built from B-spline membership
//! functions and zero-order Takagi–Sugeno consequents. The first layer holds
//! one neuron per pair of lagged inputs; a selection block ranks them by
//! running squared error, and single-neuron cascade layers are appended while
//! the output error stalls above the requested accuracy.
//!
//! ```
//! use neofuzzy::{data, CascadeModel, GrowthPolicy};
//!
//! let series = data::gen_synthetic(300);
//! let norm = data::fit_normalizer(&series, 250).unwrap();
//! let samples = data::lag_embed(&norm.apply_all(series.values()), 3).unwrap();
//! let mut model = CascadeModel::new(3, 4, 2, 1.0, GrowthPolicy::default(), 0.99).unwrap();
//! for s in &samples {
//!     model.learn_step(&s.x, s.y).unwrap();
//! }
//! assert!(model.forward(&samples[0].x).unwrap().is_finite());
//! ```

pub mod cascade;
pub mod data;
mod error;
pub mod membership;
pub mod metrics;
pub mod neuron;
pub mod snapshot;

pub use cascade::{CascadeModel, GrowthPolicy, LayerWiring, StepReport};
pub use data::{LagSample, Normalizer, SeriesFrame};
pub use error::{Error, Result};
pub use membership::MembershipBasis;
pub use metrics::{EvalReport, RunningError};
pub use neuron::{NeoFuzzyNode, Regressor};
pub use snapshot::Snapshot;
