//! Two-input neo-fuzzy neuron.
//!
//! Both synapses share one membership basis. The output is
//! `ŷ = Σ_p w_pA μ_p(x_A) + Σ_p w_pB μ_p(x_B) = wᵀφ` and learning follows the
//! scalar-gain rule
//!
//! ```text
//! r(k) = α r(k-1) + φᵀ(k) φ(k)
//! w(k) = w(k-1) + (y(k) - wᵀ(k-1) φ(k)) φ(k) / r(k)
//! ```
//!
//! With `α = 0` (or a zero starting gain) the step is the normalized
//! Kaczmarz–Widrow–Hoff projection and the posterior residual vanishes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membership::MembershipBasis;

/// Stacked membership levels `(μ_1(x_A), …, μ_h(x_A), μ_1(x_B), …, μ_h(x_B))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regressor(Vec<f64>);

impl Regressor {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn synapse_a(&self) -> &[f64] {
        &self.0[..self.0.len() / 2]
    }

    pub fn synapse_b(&self) -> &[f64] {
        &self.0[self.0.len() / 2..]
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.0.iter().zip(weights).map(|(p, w)| p * w).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeoFuzzyNode {
    basis: MembershipBasis,
    weights: Vec<f64>,
    gain: f64,
    forgetting: f64,
}

impl NeoFuzzyNode {
    /// Zero weights and zero gain, so the first update is an exact projection.
    pub fn new(basis: MembershipBasis, forgetting: f64) -> Result<Self> {
        check_forgetting(forgetting)?;
        let weights = vec![0.0; 2 * basis.count()];
        Ok(Self { basis, weights, gain: 0.0, forgetting })
    }

    /// Node with explicit state, validated against the basis.
    pub fn with_state(
        basis: MembershipBasis,
        forgetting: f64,
        weights: Vec<f64>,
        gain: f64,
    ) -> Result<Self> {
        check_forgetting(forgetting)?;
        if weights.len() != 2 * basis.count() {
            return Err(Error::InvalidArgument(format!(
                "expected {} weights, got {}",
                2 * basis.count(),
                weights.len()
            )));
        }
        if !(gain.is_finite() && gain >= 0.0) {
            return Err(Error::InvalidArgument(format!("gain must be finite and non-negative, got {gain}")));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("weights must be finite".into()));
        }
        Ok(Self { basis, weights, gain, forgetting })
    }

    /// Re-checks the invariants of a node restored from storage.
    pub fn validate(&self) -> Result<()> {
        MembershipBasis::from_parts(self.basis.order(), self.basis.count(), self.basis.knots().to_vec())?;
        Self::with_state(self.basis.clone(), self.forgetting, self.weights.clone(), self.gain).map(|_| ())
    }

    pub fn basis(&self) -> &MembershipBasis {
        &self.basis
    }

    /// `(w_1A, …, w_hA, w_1B, …, w_hB)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn forgetting(&self) -> f64 {
        self.forgetting
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.len()
    }

    pub fn regressor(&self, x_a: f64, x_b: f64) -> Regressor {
        let h = self.basis.count();
        let mut phi = vec![0.0; 2 * h];
        let (a, b) = phi.split_at_mut(h);
        self.basis.eval_into(x_a, a);
        self.basis.eval_into(x_b, b);
        Regressor(phi)
    }

    pub fn forward(&self, x_a: f64, x_b: f64) -> f64 {
        self.regressor(x_a, x_b).dot(&self.weights)
    }

    /// One learning step on `(x_a, x_b) -> target`. Returns the prediction
    /// made before the weights moved.
    pub fn update(&mut self, x_a: f64, x_b: f64, target: f64) -> Result<f64> {
        let phi = self.regressor(x_a, x_b);
        self.update_with(&phi, target)
    }

    /// Learning step for a precomputed regressor.
    pub fn update_with(&mut self, phi: &Regressor, target: f64) -> Result<f64> {
        debug_assert_eq!(phi.values().len(), self.weights.len());
        let prior = phi.dot(&self.weights);
        let innovation = target - prior;
        let gain = self.forgetting * self.gain + phi.norm_sq();
        if gain <= 0.0 {
            if innovation != 0.0 {
                return Err(Error::DegenerateRegressor { innovation });
            }
            self.gain = gain;
            return Ok(prior);
        }
        self.gain = gain;
        let step = innovation / gain;
        for (w, p) in self.weights.iter_mut().zip(phi.values()) {
            *w += step * p;
        }
        Ok(prior)
    }
}

fn check_forgetting(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("forgetting factor {alpha} outside [0, 1]")))
    }
}
