//! Evolving cascade of neo-fuzzy neurons.
//!
//! The first layer holds one two-input neuron per unordered pair of inputs,
//! each trained against the same target. A selection block ranks them by
//! running squared error. When the output error stalls above the target
//! accuracy a new single-neuron layer is stacked on top: the first cascade
//! layer reads the two best-ranked first-layer outputs, and every later layer
//! `m` reads the layer below together with the `m`-th ranked output. The
//! ranking is frozen at the first growth so existing wiring never changes.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membership::MembershipBasis;
use crate::metrics::{GrowthEvent, RunningError};
use crate::neuron::NeoFuzzyNode;

/// Plateau rule deciding when the cascade grows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GrowthPolicy {
    /// Required output mean squared error (normalized scale).
    pub target_mse: f64,
    /// Samples a tracker must see before ranking or growth decisions.
    pub warmup: usize,
    /// Window, in samples, over which improvement is measured.
    pub patience: usize,
    /// Relative error reduction over the window below which the output
    /// counts as stalled.
    pub min_rel_improvement: f64,
    /// Cap on cascade depth; `None` means the structural maximum.
    pub max_layers: Option<usize>,
}

impl Default for GrowthPolicy {
    fn default() -> Self {
        Self {
            target_mse: 1e-4,
            warmup: 100,
            patience: 50,
            min_rel_improvement: 0.01,
            max_layers: None,
        }
    }
}

impl GrowthPolicy {
    pub fn validate(&self, input_dim: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.target_mse.is_finite() && self.target_mse > 0.0) {
            return bad(format!("target_mse must be positive, got {}", self.target_mse));
        }
        if self.warmup == 0 {
            return bad("warmup must be at least 1".into());
        }
        if self.patience == 0 {
            return bad("patience must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.min_rel_improvement) {
            return bad(format!(
                "min_rel_improvement {} outside [0, 1)",
                self.min_rel_improvement
            ));
        }
        let cap = pair_count(input_dim).saturating_sub(1);
        if let Some(m) = self.max_layers {
            if m > cap {
                return bad(format!("max_layers {m} exceeds the structural limit {cap}"));
            }
        }
        Ok(())
    }
}

/// Number of unordered input pairs, `n(n-1)/2`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Source of one cascade-neuron input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayerInput {
    /// Output of the first-layer neuron at position `rank` (0-based) of the
    /// frozen ranking; `node` is that neuron's index.
    Ranked { rank: usize, node: usize },
    /// Output of cascade layer `layer` (0-based).
    Layer(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerWiring {
    pub a: LayerInput,
    pub b: LayerInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PairNode {
    inputs: (usize, usize),
    node: NeoFuzzyNode,
    error: RunningError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CascadeLayer {
    wiring: LayerWiring,
    node: NeoFuzzyNode,
    error: RunningError,
}

/// Outcome of one online learning step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    /// Model output before any weight moved.
    pub prediction: f64,
    /// Prior residuals of the first-layer neurons, in node order.
    pub node_errors: Vec<f64>,
    /// Prior residuals of the cascade layers, bottom up.
    pub layer_errors: Vec<f64>,
    pub grew: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeModel {
    input_dim: usize,
    order: usize,
    count: usize,
    forgetting: f64,
    decay: f64,
    growth: GrowthPolicy,
    first_layer: Vec<PairNode>,
    ranking: Vec<usize>,
    layers: Vec<CascadeLayer>,
    output_error: RunningError,
    output_history: VecDeque<f64>,
    samples_seen: u64,
    growth_log: Vec<GrowthEvent>,
}

impl CascadeModel {
    /// Builds the first layer for `input_dim` inputs with `count` membership
    /// functions of order `order` per synapse on `[0, 1]`.
    pub fn new(
        input_dim: usize,
        count: usize,
        order: usize,
        forgetting: f64,
        growth: GrowthPolicy,
        decay: f64,
    ) -> Result<Self> {
        if input_dim < 2 {
            return Err(Error::InvalidArgument(format!(
                "cascade needs at least 2 inputs, got {input_dim}"
            )));
        }
        growth.validate(input_dim)?;
        let basis = MembershipBasis::unit(order, count)?;
        let tracker = RunningError::new(decay)?;
        let template = NeoFuzzyNode::new(basis, forgetting)?;

        let mut first_layer = Vec::with_capacity(pair_count(input_dim));
        for i in 0..input_dim {
            for j in i + 1..input_dim {
                first_layer.push(PairNode {
                    inputs: (i, j),
                    node: template.clone(),
                    error: tracker.clone(),
                });
            }
        }
        let ranking = (0..first_layer.len()).collect();
        Ok(Self {
            input_dim,
            order,
            count,
            forgetting,
            decay,
            growth,
            first_layer,
            ranking,
            layers: Vec::new(),
            output_error: tracker,
            output_history: VecDeque::new(),
            samples_seen: 0,
            growth_log: Vec::new(),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn membership_count(&self) -> usize {
        self.count
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn forgetting(&self) -> f64 {
        self.forgetting
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn growth_policy(&self) -> &GrowthPolicy {
        &self.growth
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn max_depth(&self) -> usize {
        let cap = pair_count(self.input_dim) - 1;
        self.growth.max_layers.map_or(cap, |m| m.min(cap))
    }

    pub fn samples_seen(&self) -> u64 {
        self.samples_seen
    }

    pub fn growth_log(&self) -> &[GrowthEvent] {
        &self.growth_log
    }

    /// Input index pairs of the first layer, in node order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.first_layer.iter().map(|p| p.inputs).collect()
    }

    /// Current selection-block order, best node first.
    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn is_frozen(&self) -> bool {
        !self.layers.is_empty()
    }

    /// Bias-corrected running MSE of every first-layer neuron.
    pub fn node_mse(&self) -> Vec<f64> {
        self.first_layer.iter().map(|p| p.error.mse()).collect()
    }

    pub fn layer_mse(&self) -> Vec<f64> {
        self.layers.iter().map(|l| l.error.mse()).collect()
    }

    /// Running MSE of the model output since the last architecture change.
    pub fn output_mse(&self) -> f64 {
        self.output_error.mse()
    }

    pub fn first_layer_node(&self, index: usize) -> &NeoFuzzyNode {
        &self.first_layer[index].node
    }

    pub fn cascade_node(&self, layer: usize) -> &NeoFuzzyNode {
        &self.layers[layer].node
    }

    pub fn layer_wiring(&self, layer: usize) -> LayerWiring {
        self.layers[layer].wiring
    }

    /// Replaces the neuron of cascade layer `layer`, keeping its wiring.
    pub fn set_cascade_node(&mut self, layer: usize, node: NeoFuzzyNode) -> Result<()> {
        self.check_node(&node)?;
        let slot = self
            .layers
            .get_mut(layer)
            .ok_or_else(|| Error::InvalidArgument(format!("no cascade layer {layer}")))?;
        slot.node = node;
        Ok(())
    }

    /// Replaces first-layer neuron `index`.
    pub fn set_first_layer_node(&mut self, index: usize, node: NeoFuzzyNode) -> Result<()> {
        self.check_node(&node)?;
        let slot = self
            .first_layer
            .get_mut(index)
            .ok_or_else(|| Error::InvalidArgument(format!("no first-layer node {index}")))?;
        slot.node = node;
        Ok(())
    }

    fn check_node(&self, node: &NeoFuzzyNode) -> Result<()> {
        let b = node.basis();
        if b.count() != self.count || b.order() != self.order {
            return Err(Error::InvalidArgument(format!(
                "node basis ({}, {}) does not match the model ({}, {})",
                b.order(),
                b.count(),
                self.order,
                self.count
            )));
        }
        Ok(())
    }

    /// Tunable weights across all neurons: `2h · (C(n,2) + depth)`.
    pub fn parameter_count(&self) -> usize {
        2 * self.count * (self.first_layer.len() + self.layers.len())
    }

    fn warmed_up(&self) -> bool {
        self.first_layer
            .iter()
            .all(|p| p.error.samples_seen() >= self.growth.warmup as u64)
    }

    fn sort_ranking(&mut self) {
        let mse = self.node_mse();
        // Stable sort keeps ascending node index among ties.
        let mut order: Vec<usize> = (0..mse.len()).collect();
        order.sort_by(|&a, &b| mse[a].total_cmp(&mse[b]));
        self.ranking = order;
    }

    /// Re-sorts the selection block by ascending running MSE. A frozen
    /// ranking is returned unchanged.
    pub fn rank_nodes(&mut self) -> Result<&[usize]> {
        if !self.is_frozen() {
            if !self.warmed_up() {
                let seen = self
                    .first_layer
                    .iter()
                    .map(|p| p.error.samples_seen())
                    .min()
                    .unwrap_or(0);
                return Err(Error::NotWarmedUp {
                    needed: self.growth.warmup,
                    seen: seen as usize,
                });
            }
            self.sort_ranking();
        }
        Ok(&self.ranking)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, found: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("inputs must be finite".into()));
        }
        Ok(())
    }

    fn resolve(input: LayerInput, first: &[f64], layers: &[f64]) -> f64 {
        let v = match input {
            LayerInput::Ranked { node, .. } => first[node],
            LayerInput::Layer(l) => layers[l],
        };
        v.clamp(0.0, 1.0)
    }

    /// Model output for a normalized input vector. Inputs are clipped to
    /// `[0, 1]`.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        let first: Vec<f64> = self
            .first_layer
            .iter()
            .map(|p| p.node.forward(clip(x[p.inputs.0]), clip(x[p.inputs.1])))
            .collect();
        let mut outputs = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let a = Self::resolve(layer.wiring.a, &first, &outputs);
            let b = Self::resolve(layer.wiring.b, &first, &outputs);
            outputs.push(layer.node.forward(a, b));
        }
        Ok(outputs.last().copied().unwrap_or(first[self.ranking[0]]))
    }

    /// One online step: every neuron learns the target from its prior
    /// inputs, trackers absorb the prior residuals, and the growth rule is
    /// checked. Returns the prior model prediction.
    pub fn learn_step(&mut self, x: &[f64], target: f64) -> Result<StepReport> {
        self.check_input(x)?;
        if !target.is_finite() {
            return Err(Error::InvalidArgument("target must be finite".into()));
        }

        let mut first = Vec::with_capacity(self.first_layer.len());
        for p in &mut self.first_layer {
            let prior = p.node.update(clip(x[p.inputs.0]), clip(x[p.inputs.1]), target)?;
            p.error.update(target - prior);
            first.push(prior);
        }

        let mut outputs = Vec::with_capacity(self.layers.len());
        for layer in &mut self.layers {
            let a = Self::resolve(layer.wiring.a, &first, &outputs);
            let b = Self::resolve(layer.wiring.b, &first, &outputs);
            let prior = layer.node.update(a, b, target)?;
            layer.error.update(target - prior);
            outputs.push(prior);
        }

        let prediction = outputs.last().copied().unwrap_or(first[self.ranking[0]]);
        self.output_error.update(target - prediction);
        self.samples_seen += 1;

        if !self.is_frozen() && self.warmed_up() {
            self.sort_ranking();
        }
        let grew = self.should_grow();
        if grew {
            self.grow()?;
        }

        Ok(StepReport {
            prediction,
            node_errors: first.iter().map(|p| target - p).collect(),
            layer_errors: outputs.iter().map(|p| target - p).collect(),
            grew,
        })
    }

    fn should_grow(&mut self) -> bool {
        let window = self.growth.patience + 1;
        self.output_history.push_back(self.output_error.mse());
        while self.output_history.len() > window {
            self.output_history.pop_front();
        }
        if self.depth() >= self.max_depth()
            || self.output_error.samples_seen() < self.growth.warmup as u64
            || self.output_history.len() < window
        {
            return false;
        }
        let now = self.output_error.mse();
        if now <= self.growth.target_mse {
            return false;
        }
        let then = self.output_history[0];
        let improvement = if then > 0.0 { (then - now) / then } else { 0.0 };
        improvement < self.growth.min_rel_improvement
    }

    /// Stacks one zero-initialized cascade layer. The first growth re-sorts
    /// and freezes the selection block.
    pub fn grow(&mut self) -> Result<()> {
        let depth = self.depth();
        if depth >= self.max_depth() {
            return Err(Error::CapacityExhausted { max: self.max_depth() });
        }
        if depth == 0 {
            self.sort_ranking();
        }
        let ranked = |rank: usize| LayerInput::Ranked { rank, node: self.ranking[rank] };
        let wiring = if depth == 0 {
            LayerWiring { a: ranked(0), b: ranked(1) }
        } else {
            LayerWiring { a: LayerInput::Layer(depth - 1), b: ranked(depth + 1) }
        };
        let basis = MembershipBasis::unit(self.order, self.count)?;
        self.layers.push(CascadeLayer {
            wiring,
            node: NeoFuzzyNode::new(basis, self.forgetting)?,
            error: RunningError::new(self.decay)?,
        });
        self.output_error.reset();
        self.output_history.clear();
        self.growth_log.push(GrowthEvent { sample: self.samples_seen, depth: self.depth() });
        Ok(())
    }

    /// Structural consistency check for models loaded from storage.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("inconsistent model: {m}")));
        if self.input_dim < 2 {
            return bad("input_dim below 2");
        }
        self.growth.validate(self.input_dim)?;
        let n_pairs = pair_count(self.input_dim);
        if self.first_layer.len() != n_pairs {
            return bad("first layer size");
        }
        let expected_pairs = (0..self.input_dim).flat_map(|i| (i + 1..self.input_dim).map(move |j| (i, j)));
        if !self.first_layer.iter().map(|p| p.inputs).eq(expected_pairs) {
            return bad("first layer pairs");
        }
        let mut seen = vec![false; n_pairs];
        for &r in &self.ranking {
            if r >= n_pairs || std::mem::replace(&mut seen[r], true) {
                return bad("ranking is not a permutation");
            }
        }
        if self.ranking.len() != n_pairs {
            return bad("ranking is not a permutation");
        }
        if self.layers.len() > n_pairs - 1 {
            return bad("cascade deeper than the first layer allows");
        }
        for (l, layer) in self.layers.iter().enumerate() {
            let ranked = |rank: usize| LayerInput::Ranked { rank, node: self.ranking[rank] };
            let expected = if l == 0 {
                LayerWiring { a: ranked(0), b: ranked(1) }
            } else {
                LayerWiring { a: LayerInput::Layer(l - 1), b: ranked(l + 1) }
            };
            if layer.wiring != expected {
                return bad("cascade wiring");
            }
        }
        let nodes = self.first_layer.iter().map(|p| &p.node).chain(self.layers.iter().map(|l| &l.node));
        for node in nodes {
            self.check_node(node)?;
            node.validate()?;
        }
        Ok(())
    }
}

fn clip(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}
