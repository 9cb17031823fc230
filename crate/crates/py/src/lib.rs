//! Python bindings for `cournot-core`.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cournot_core::analysis::{self, Interval, ProbeBox, ProbeKind};
use cournot_core::stability::{self, agreement_detail};
use cournot_core::{CostKind, CostSide, CournotError, Model, ResponseOptions, State};

fn to_py(e: CournotError) -> PyErr {
    match e {
        CournotError::InvalidParameter(_)
        | CournotError::Domain(_)
        | CournotError::MixedCostKinds
        | CournotError::AxisNotApplicable { .. } => PyValueError::new_err(e.to_string()),
        CournotError::Escape { .. } => PyArithmeticError::new_err(e.to_string()),
        CournotError::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = CournotError>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

/// Model, adjustment parameters and cost coefficients (validated).
#[pyclass(name = "ModelSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyModelSpec {
    inner: cournot_core::ModelSpec,
}

#[pymethods]
impl PyModelSpec {
    #[new]
    #[pyo3(signature = (model, cost, c1, c2, k, k2=None, l=None))]
    fn new(
        model: &str,
        cost: &str,
        c1: f64,
        c2: f64,
        k: f64,
        k2: Option<f64>,
        l: Option<f64>,
    ) -> PyResult<Self> {
        let kind: CostKind = parse(cost)?;
        let mut inner = cournot_core::ModelSpec::new(
            parse::<Model>(model)?,
            [CostSide::new(kind, c1), CostSide::new(kind, c2)],
            k,
        );
        inner.k2 = k2;
        inner.l = l;
        Ok(PyModelSpec {
            inner: inner.validate().map_err(to_py)?,
        })
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.inner.model.name()
    }

    #[getter]
    fn cost(&self) -> &'static str {
        self.inner.cost_kind().name()
    }

    #[getter]
    fn c1(&self) -> f64 {
        self.inner.c1()
    }

    #[getter]
    fn c2(&self) -> f64 {
        self.inner.c2()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k
    }

    #[getter]
    fn k2(&self) -> Option<f64> {
        self.inner.k2
    }

    #[getter]
    fn l(&self) -> Option<f64> {
        self.inner.l
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "ModelSpec(model='{}', cost='{}', c1={}, c2={}, k={}, k2={:?}, l={:?})",
            s.model.name(),
            s.cost_kind().name(),
            s.c1(),
            s.c2(),
            s.k,
            s.k2,
            s.l
        )
    }
}

/// Profit-maximizing output against rival output `q_rival`.
#[pyfunction]
fn best_response(cost: &str, c: f64, q_rival: f64) -> PyResult<f64> {
    cournot_core::best_response(
        CostSide::new(parse(cost)?, c),
        q_rival,
        &ResponseOptions::default(),
    )
    .map_err(to_py)
}

/// Equilibrium outputs `(q1, q2)`.
#[pyfunction]
fn nash_equilibrium(cost: &str, c1: f64, c2: f64) -> PyResult<(f64, f64)> {
    let kind: CostKind = parse(cost)?;
    let e = cournot_core::nash_equilibrium([CostSide::new(kind, c1), CostSide::new(kind, c2)])
        .map_err(to_py)?;
    Ok((e.state.q1, e.state.q2))
}

#[pyfunction]
fn step(spec: PyModelSpec, q1: f64, q2: f64) -> PyResult<(f64, f64)> {
    let s = cournot_core::step(&spec.inner, State::new(q1, q2)).map_err(to_py)?;
    Ok((s.q1, s.q2))
}

/// Post-transient states and the escape step (None if the orbit stayed
/// positive).
#[pyfunction]
#[pyo3(signature = (spec, q1, q2, n_steps, transient=0))]
fn orbit(
    spec: PyModelSpec,
    q1: f64,
    q2: f64,
    n_steps: usize,
    transient: usize,
) -> (Vec<(f64, f64)>, Option<usize>) {
    let o = cournot_core::orbit(&spec.inner, State::new(q1, q2), n_steps, transient);
    (
        o.states.iter().map(|s| (s.q1, s.q2)).collect(),
        o.escape_index,
    )
}

/// Jacobian `(a11, a12, a21, a22)` of the step at `(q1, q2)`.
#[pyfunction]
fn jacobian(spec: PyModelSpec, q1: f64, q2: f64) -> PyResult<(f64, f64, f64, f64)> {
    let j = cournot_core::jacobian(&spec.inner, State::new(q1, q2)).map_err(to_py)?;
    Ok((j.a11, j.a12, j.a21, j.a22))
}

/// Criterion polynomial values and the stability they imply.
#[pyfunction]
fn criteria<'py>(py: Python<'py>, spec: PyModelSpec) -> PyResult<Bound<'py, PyDict>> {
    let set = cournot_core::criteria(&spec.inner);
    let d = PyDict::new(py);
    for (name, value) in set.named_values() {
        d.set_item(name, value)?;
    }
    d.set_item("stable", set.stable)?;
    Ok(d)
}

/// Jury verdict at the equilibrium.
#[pyfunction]
fn verdict<'py>(py: Python<'py>, spec: PyModelSpec) -> PyResult<Bound<'py, PyDict>> {
    let v = stability::verdict(&spec.inner).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("class", v.class.name())?;
    d.set_item("jury", v.jury.to_vec())?;
    d.set_item("spectral_radius", v.spectral_radius)?;
    d.set_item("criterion_values", v.criterion_values)?;
    Ok(d)
}

/// "agree", "disagree" or "near_boundary".
#[pyfunction]
fn agreement(spec: PyModelSpec) -> PyResult<&'static str> {
    Ok(agreement_detail(&spec.inner).map_err(to_py)?.outcome.name())
}

#[pyfunction]
fn lyapunov(spec: PyModelSpec, q1: f64, q2: f64, n: usize) -> PyResult<f64> {
    analysis::lyapunov(&spec.inner, State::new(q1, q2), n).map_err(to_py)
}

/// Number of linear-stable, quadratic-unstable points among `n_samples`
/// draws with `c1, c2` in `(0, c_max]` and `K` in `(0, k_max]`.
#[pyfunction]
#[pyo3(signature = (model, n_samples, seed=42, c_max=20.0, k_max=5.0, tie_k=false))]
fn containment_violations(
    model: &str,
    n_samples: usize,
    seed: u64,
    c_max: f64,
    k_max: f64,
    tie_k: bool,
) -> PyResult<usize> {
    let model: Model = parse(model)?;
    let c = Interval::new(0.0, c_max);
    let k = Interval::new(0.0, k_max);
    let mut region = ProbeBox::new(c, c, k)
        .with_k2(k)
        .with_l(Interval::new(0.0, 0.999_999));
    region.tie_k = tie_k;
    let report =
        analysis::containment_probe(model, &region, n_samples, seed, ProbeKind::Containment)
            .map_err(to_py)?;
    Ok(report.violations.len())
}

#[pymodule]
fn cournot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelSpec>()?;
    m.add_function(wrap_pyfunction!(best_response, m)?)?;
    m.add_function(wrap_pyfunction!(nash_equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(step, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(criteria, m)?)?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(agreement, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov, m)?)?;
    m.add_function(wrap_pyfunction!(containment_violations, m)?)?;
    Ok(())
}
