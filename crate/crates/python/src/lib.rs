use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use neofuzzy::cascade::LayerInput;
use neofuzzy::{data, metrics, GrowthPolicy, Snapshot};

fn to_py(err: neofuzzy::Error) -> PyErr {
    match err {
        neofuzzy::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// B-spline membership functions on a clamped uniform knot vector.
#[pyclass(name = "MembershipBasis", module = "neofuzzy_cascade", skip_from_py_object)]
#[derive(Clone)]
struct PyMembershipBasis(neofuzzy::MembershipBasis);

#[pymethods]
impl PyMembershipBasis {
    #[new]
    #[pyo3(signature = (order, count, lo=0.0, hi=1.0))]
    fn new(order: usize, count: usize, lo: f64, hi: f64) -> PyResult<Self> {
        neofuzzy::MembershipBasis::new(order, count, lo, hi).map(Self).map_err(to_py)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn count(&self) -> usize {
        self.0.count()
    }

    #[getter]
    fn knots(&self) -> Vec<f64> {
        self.0.knots().to_vec()
    }

    /// Membership levels of `x` (clipped to the domain).
    fn eval(&self, x: f64) -> Vec<f64> {
        let (lo, hi) = self.0.domain();
        self.0.eval(x.clamp(lo, hi))
    }

    fn __repr__(&self) -> String {
        format!("MembershipBasis(order={}, count={})", self.0.order(), self.0.count())
    }
}

/// Two-input neo-fuzzy neuron with the scalar-gain learning rule.
#[pyclass(name = "NeoFuzzyNode", module = "neofuzzy_cascade", skip_from_py_object)]
#[derive(Clone)]
struct PyNeoFuzzyNode(neofuzzy::NeoFuzzyNode);

#[pymethods]
impl PyNeoFuzzyNode {
    #[new]
    #[pyo3(signature = (count=4, order=2, forgetting=1.0, weights=None))]
    fn new(count: usize, order: usize, forgetting: f64, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let basis = neofuzzy::MembershipBasis::unit(order, count).map_err(to_py)?;
        let node = match weights {
            Some(w) => neofuzzy::NeoFuzzyNode::with_state(basis, forgetting, w, 0.0),
            None => neofuzzy::NeoFuzzyNode::new(basis, forgetting),
        };
        node.map(Self).map_err(to_py)
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.0.weights().to_vec()
    }

    #[getter]
    fn gain(&self) -> f64 {
        self.0.gain()
    }

    #[getter]
    fn forgetting(&self) -> f64 {
        self.0.forgetting()
    }

    fn regressor(&self, x_a: f64, x_b: f64) -> Vec<f64> {
        self.0.regressor(x_a.clamp(0.0, 1.0), x_b.clamp(0.0, 1.0)).values().to_vec()
    }

    fn forward(&self, x_a: f64, x_b: f64) -> f64 {
        self.0.forward(x_a.clamp(0.0, 1.0), x_b.clamp(0.0, 1.0))
    }

    /// Learns one sample; returns the prediction made before the update.
    fn update(&mut self, x_a: f64, x_b: f64, target: f64) -> PyResult<f64> {
        self.0.update(x_a.clamp(0.0, 1.0), x_b.clamp(0.0, 1.0), target).map_err(to_py)
    }
}

/// Evolving cascade of neo-fuzzy neurons over `input_dim` lagged inputs.
#[pyclass(name = "CascadeModel", module = "neofuzzy_cascade", skip_from_py_object)]
#[derive(Clone)]
struct PyCascadeModel(neofuzzy::CascadeModel);

#[pymethods]
impl PyCascadeModel {
    #[new]
    #[pyo3(signature = (
        input_dim,
        memberships=4,
        order=2,
        forgetting=0.9,
        decay=0.99,
        target_mse=1e-4,
        warmup=100,
        patience=50,
        min_rel_improvement=0.01,
        max_layers=None,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        input_dim: usize,
        memberships: usize,
        order: usize,
        forgetting: f64,
        decay: f64,
        target_mse: f64,
        warmup: usize,
        patience: usize,
        min_rel_improvement: f64,
        max_layers: Option<usize>,
    ) -> PyResult<Self> {
        let growth = GrowthPolicy { target_mse, warmup, patience, min_rel_improvement, max_layers };
        neofuzzy::CascadeModel::new(input_dim, memberships, order, forgetting, growth, decay)
            .map(Self)
            .map_err(to_py)
    }

    /// One online step; returns `(prior_prediction, grew)`.
    fn learn_step(&mut self, x: Vec<f64>, target: f64) -> PyResult<(f64, bool)> {
        let report = self.0.learn_step(&x, target).map_err(to_py)?;
        Ok((report.prediction, report.grew))
    }

    fn forward(&self, x: Vec<f64>) -> PyResult<f64> {
        self.0.forward(&x).map_err(to_py)
    }

    fn grow(&mut self) -> PyResult<()> {
        self.0.grow().map_err(to_py)
    }

    fn rank_nodes(&mut self) -> PyResult<Vec<usize>> {
        self.0.rank_nodes().map(<[usize]>::to_vec).map_err(to_py)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    #[getter]
    fn ranking(&self) -> Vec<usize> {
        self.0.ranking().to_vec()
    }

    #[getter]
    fn pairs(&self) -> Vec<(usize, usize)> {
        self.0.pairs()
    }

    #[getter]
    fn parameter_count(&self) -> usize {
        self.0.parameter_count()
    }

    #[getter]
    fn node_mse(&self) -> Vec<f64> {
        self.0.node_mse()
    }

    #[getter]
    fn growth_log(&self) -> Vec<(u64, usize)> {
        self.0.growth_log().iter().map(|e| (e.sample, e.depth)).collect()
    }

    /// Inputs of cascade layer `layer` as `(kind, index)` pairs, where kind
    /// is `"layer"` or `"ranked"` and index is a layer or first-layer node.
    fn layer_inputs(&self, layer: usize) -> PyResult<Vec<(&'static str, usize)>> {
        if layer >= self.0.depth() {
            return Err(PyValueError::new_err(format!("no cascade layer {layer}")));
        }
        let wiring = self.0.layer_wiring(layer);
        Ok([wiring.a, wiring.b]
            .into_iter()
            .map(|input| match input {
                LayerInput::Layer(l) => ("layer", l),
                LayerInput::Ranked { node, .. } => ("ranked", node),
            })
            .collect())
    }

    /// Snapshot document for this model and the given input scaling.
    fn to_json(&self, normalizer: &PyNormalizer) -> PyResult<String> {
        Snapshot::new(self.0.clone(), normalizer.0).to_json().map_err(to_py)
    }

    /// Restores `(model, normalizer)` from a snapshot document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<(Self, PyNormalizer)> {
        let snap = Snapshot::from_json(text).map_err(to_py)?;
        Ok((Self(snap.model), PyNormalizer(snap.normalizer)))
    }
}

/// Affine scaling of `[lo, hi]` onto `[0, 1]` with clipping.
#[pyclass(name = "Normalizer", module = "neofuzzy_cascade", skip_from_py_object)]
#[derive(Clone)]
struct PyNormalizer(neofuzzy::Normalizer);

#[pymethods]
impl PyNormalizer {
    #[new]
    fn new(lo: f64, hi: f64) -> PyResult<Self> {
        neofuzzy::Normalizer::new(lo, hi).map(Self).map_err(to_py)
    }

    /// Fits on the first `split_point` values.
    #[staticmethod]
    fn fit(values: Vec<f64>, split_point: usize) -> PyResult<Self> {
        let frame = neofuzzy::SeriesFrame::new("series", values).map_err(to_py)?;
        data::fit_normalizer(&frame, split_point).map(Self).map_err(to_py)
    }

    #[getter]
    fn lo(&self) -> f64 {
        self.0.lo()
    }

    #[getter]
    fn hi(&self) -> f64 {
        self.0.hi()
    }

    fn apply(&self, values: Vec<f64>) -> Vec<f64> {
        self.0.apply_all(&values)
    }

    fn invert(&self, values: Vec<f64>) -> Vec<f64> {
        values.into_iter().map(|u| self.0.invert(u)).collect()
    }
}

/// The synthetic nonlinear benchmark series.
#[pyfunction]
fn gen_synthetic(length: usize) -> Vec<f64> {
    data::gen_synthetic(length).values().to_vec()
}

/// Lag windows of `values`: returns `(inputs, targets)` with inputs newest first.
#[pyfunction]
fn lag_embed(values: Vec<f64>, lags: usize) -> PyResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let samples = data::lag_embed(&values, lags).map_err(to_py)?;
    Ok(samples.into_iter().map(|s| (s.x, s.y)).unzip())
}

/// First column of a CSV file by index or header name.
#[pyfunction]
#[pyo3(signature = (path, column="0"))]
fn load_csv(path: &str, column: &str) -> PyResult<Vec<f64>> {
    let column: data::Column = column.parse().expect("infallible");
    data::load_csv(path, &column).map(|f| f.values().to_vec()).map_err(to_py)
}

#[pyfunction]
fn rmse(errors: Vec<f64>) -> PyResult<f64> {
    metrics::rmse(&errors).map_err(to_py)
}

#[pymodule]
fn neofuzzy_cascade(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMembershipBasis>()?;
    m.add_class::<PyNeoFuzzyNode>()?;
    m.add_class::<PyCascadeModel>()?;
    m.add_class::<PyNormalizer>()?;
    m.add_function(wrap_pyfunction!(gen_synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(lag_embed, m)?)?;
    m.add_function(wrap_pyfunction!(load_csv, m)?)?;
    m.add_function(wrap_pyfunction!(rmse, m)?)?;
    Ok(())
}
