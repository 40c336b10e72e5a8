//! Python bindings: deformed logarithms, the incomplete beta integral, the
//! model table, trajectories and fitting.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qgrowth::dynamics::{self, IntegratorConfig};
use qgrowth::fitkit::{self, LossSpace, ObservationSeries};
use qgrowth::models::{self, ModelKind, ParamMap};
use qgrowth::{qcore, specfun};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(name: &str) -> PyResult<ModelKind> {
    name.parse().map_err(value_error)
}

fn config(rel_tol: f64, abs_tol: f64, max_steps: usize) -> PyResult<IntegratorConfig> {
    let cfg = IntegratorConfig { rel_tol, abs_tol, max_steps, ..IntegratorConfig::default() };
    cfg.validate().map_err(value_error)?;
    Ok(cfg)
}

/// Canonical parameters of the unified growth law.
#[pyclass(frozen, skip_from_py_object, name = "GrowthParams", module = "qgrowth")]
#[derive(Clone)]
struct PyGrowthParams(models::GrowthParams);

#[pymethods]
impl PyGrowthParams {
    #[new]
    #[pyo3(signature = (qprime=0.0, q=1.0, gamma=1.0, kappa=1.0, epsilon=0.0, p0=0.001))]
    fn new(qprime: f64, q: f64, gamma: f64, kappa: f64, epsilon: f64, p0: f64) -> PyResult<Self> {
        models::GrowthParams::new(qprime, q, gamma, kappa, epsilon, p0).map(Self).map_err(value_error)
    }

    #[getter]
    fn qprime(&self) -> f64 {
        self.0.q_prime()
    }
    #[getter]
    fn q(&self) -> f64 {
        self.0.q()
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa()
    }
    #[getter]
    fn epsilon(&self) -> f64 {
        self.0.effort()
    }
    #[getter]
    fn p0(&self) -> f64 {
        self.0.p0()
    }

    /// Relative growth rate d ln p / dt at `p`.
    fn saturation_rate(&self, p: f64) -> PyResult<f64> {
        models::saturation_rate(&self.0, p).map_err(value_error)
    }

    fn rhs(&self, p: f64) -> PyResult<f64> {
        models::rhs_dp_dt(&self.0, p).map_err(value_error)
    }

    fn as_dict(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            ("qprime", self.0.q_prime()),
            ("q", self.0.q()),
            ("gamma", self.0.gamma()),
            ("kappa", self.0.kappa()),
            ("epsilon", self.0.effort()),
            ("p0", self.0.p0()),
        ])
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "GrowthParams(qprime={:?}, q={:?}, gamma={:?}, kappa={:?}, epsilon={:?}, p0={:?})",
            p.q_prime(),
            p.q(),
            p.gamma(),
            p.kappa(),
            p.effort(),
            p.p0()
        )
    }
}

/// Sampled solution. `flags` holds "ok", "clamped" or "diverged" per point.
#[pyclass(frozen, name = "Trajectory", module = "qgrowth")]
struct PyTrajectory {
    #[pyo3(get)]
    times: Vec<f64>,
    #[pyo3(get)]
    values: Vec<f64>,
    #[pyo3(get)]
    flags: Vec<&'static str>,
    #[pyo3(get)]
    method: &'static str,
}

impl PyTrajectory {
    fn new(traj: &dynamics::Trajectory, method: dynamics::Method) -> Self {
        PyTrajectory {
            times: traj.times().to_vec(),
            values: traj.values().to_vec(),
            flags: traj.flags().iter().map(|f| f.as_str()).collect(),
            method: method.as_str(),
        }
    }
}

#[pymethods]
impl PyTrajectory {
    fn __len__(&self) -> usize {
        self.times.len()
    }

    fn __repr__(&self) -> String {
        format!("Trajectory(len={}, method={:?})", self.times.len(), self.method)
    }
}

#[pyclass(frozen, name = "FitResult", module = "qgrowth")]
struct PyFitResult {
    #[pyo3(get)]
    params: PyGrowthParams,
    #[pyo3(get)]
    free_values: ParamMap,
    #[pyo3(get)]
    sse: f64,
    #[pyo3(get)]
    n_evals: usize,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    method: &'static str,
}

#[pymethods]
impl PyFitResult {
    fn __repr__(&self) -> String {
        format!("FitResult(free_values={:?}, sse={:e}, converged={})", self.free_values, self.sse, self.converged)
    }
}

#[pyfunction]
fn qln(q: f64, x: f64) -> PyResult<f64> {
    qcore::qln(q, x).map_err(value_error)
}

#[pyfunction]
fn qexp(q: f64, x: f64) -> PyResult<f64> {
    qcore::qexp(q, x).map_err(value_error)
}

#[pyfunction]
fn qexp_clamp_boundary(q: f64) -> f64 {
    qcore::qexp_clamp_boundary(q)
}

#[pyfunction]
fn inc_beta(a: f64, b: f64, x: f64) -> PyResult<f64> {
    specfun::inc_beta(a, b, x).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (target, a, b, lo=0.0, hi=1.0))]
fn inc_beta_inverse(target: f64, a: f64, b: f64, lo: f64, hi: f64) -> PyResult<f64> {
    specfun::inc_beta_inverse(target, a, b, lo, hi).map_err(value_error)
}

/// Binds a table row's free parameters, e.g. `model_table("Richards", {"q": 0.5, "kappa": 1})`.
#[pyfunction]
#[pyo3(signature = (kind, params=None))]
fn model_table(kind: &str, params: Option<ParamMap>) -> PyResult<PyGrowthParams> {
    models::model_table(parse_kind(kind)?, &params.unwrap_or_default()).map(PyGrowthParams).map_err(value_error)
}

/// Rows of the model table as dictionaries of strings.
#[pyfunction]
#[pyo3(signature = (extended=false))]
fn table(extended: bool) -> Vec<BTreeMap<&'static str, String>> {
    models::table_rows(extended)
        .into_iter()
        .map(|r| {
            BTreeMap::from([
                ("kind", r.kind.name().to_string()),
                ("model", r.model.to_string()),
                ("qprime", r.qprime.to_string()),
                ("q", r.q.to_string()),
                ("gamma", r.gamma.to_string()),
                ("kappa", r.kappa.to_string()),
                ("alpha", r.alpha.to_string()),
                ("free", r.free.to_string()),
                ("equation", r.equation.to_string()),
                ("approximation", r.approximation.to_string()),
            ])
        })
        .collect()
}

/// Trajectory of a named row on `times`, using a closed form when one exists.
#[pyfunction]
#[pyo3(signature = (kind, params, times, rel_tol=1e-9, abs_tol=1e-12, max_steps=100_000))]
fn solve(kind: &str, params: ParamMap, times: Vec<f64>, rel_tol: f64, abs_tol: f64, max_steps: usize) -> PyResult<PyTrajectory> {
    let cfg = config(rel_tol, abs_tol, max_steps)?;
    let (traj, method) = dynamics::solve(parse_kind(kind)?, &params, &times, &cfg).map_err(value_error)?;
    Ok(PyTrajectory::new(&traj, method))
}

/// Adaptive Dormand-Prince integration of the unified law.
#[pyfunction]
#[pyo3(signature = (params, times, rel_tol=1e-9, abs_tol=1e-12, max_steps=100_000))]
fn integrate(params: &PyGrowthParams, times: Vec<f64>, rel_tol: f64, abs_tol: f64, max_steps: usize) -> PyResult<PyTrajectory> {
    let cfg = config(rel_tol, abs_tol, max_steps)?;
    let traj = dynamics::integrate(&params.0, &times, &cfg).map_err(value_error)?;
    Ok(PyTrajectory::new(&traj, dynamics::Method::Ode))
}

#[pyfunction]
fn propagate_beta(params: &PyGrowthParams, times: Vec<f64>) -> PyResult<PyTrajectory> {
    let traj = dynamics::propagate_beta(&params.0, &times).map_err(value_error)?;
    Ok(PyTrajectory::new(&traj, dynamics::Method::Beta))
}

/// Least-squares fit of normalized observations `values` (0 < p) at `times`.
#[pyfunction]
#[pyo3(signature = (kind, times, values, free, init, loss="log"))]
fn fit(kind: &str, times: Vec<f64>, values: Vec<f64>, free: Vec<String>, init: ParamMap, loss: &str) -> PyResult<PyFitResult> {
    let loss: LossSpace = loss.parse().map_err(value_error)?;
    let series = ObservationSeries::normalized(times, values).map_err(value_error)?;
    let free: Vec<&str> = free.iter().map(String::as_str).collect();
    let r = fitkit::fit(&series, parse_kind(kind)?, &free, &init, loss).map_err(value_error)?;
    Ok(PyFitResult {
        params: PyGrowthParams(r.params),
        free_values: r.free_values,
        sse: r.sse,
        n_evals: r.n_evals,
        converged: r.converged,
        method: r.method.as_str(),
    })
}

#[pymodule(name = "qgrowth")]
fn qgrowth_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrowthParams>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyFitResult>()?;
    m.add_function(wrap_pyfunction!(qln, m)?)?;
    m.add_function(wrap_pyfunction!(qexp, m)?)?;
    m.add_function(wrap_pyfunction!(qexp_clamp_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(inc_beta, m)?)?;
    m.add_function(wrap_pyfunction!(inc_beta_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(model_table, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(propagate_beta, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    Ok(())
}
