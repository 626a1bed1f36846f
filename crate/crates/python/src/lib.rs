//! Python bindings for the `sparse_lms` crate.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyArithmeticError, PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sparse_lms::experiment::{self, ExecutionMode};
use sparse_lms::filter::{self, Algorithm, FilterParams, LeakSign};
use sparse_lms::io;
use sparse_lms::signal::{
    self, Ar1Config, NoiseConfig, RngStream, SparseSystemSpec, StreamPurpose,
};
use sparse_lms::Error;

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::Dimension { .. } | Error::Parameter { .. } | Error::Config { .. } => {
            PyValueError::new_err(msg)
        }
        Error::Divergence { .. } => PyArithmeticError::new_err(msg),
        Error::Io(_) | Error::Csv { .. } => PyIOError::new_err(msg),
        Error::AllDiverged { .. } => PyRuntimeError::new_err(msg),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse::<T>().map_err(to_py)
}

#[pyclass(name = "FilterParams", skip_from_py_object)]
#[derive(Clone)]
struct PyFilterParams {
    inner: FilterParams,
}

#[pymethods]
impl PyFilterParams {
    #[new]
    #[pyo3(signature = (mu=0.015, gamma=0.0, rho_p=None, epsilon_p=10.0, p=0.5, leak_sign="plus", gamma_p=None))]
    fn new(
        mu: f64,
        gamma: f64,
        rho_p: Option<f64>,
        epsilon_p: f64,
        p: f64,
        leak_sign: &str,
        gamma_p: Option<f64>,
    ) -> PyResult<Self> {
        let rho_p = FilterParams::resolve_rho_p(mu, rho_p, gamma_p)
            .map_err(to_py)?
            .unwrap_or(0.0);
        Ok(PyFilterParams {
            inner: FilterParams {
                mu,
                gamma,
                rho_p,
                epsilon_p,
                p,
                leak_sign: parse(leak_sign)?,
            },
        })
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }
    #[setter]
    fn set_mu(&mut self, v: f64) {
        self.inner.mu = v;
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }
    #[setter]
    fn set_gamma(&mut self, v: f64) {
        self.inner.gamma = v;
    }
    #[getter]
    fn rho_p(&self) -> f64 {
        self.inner.rho_p
    }
    #[setter]
    fn set_rho_p(&mut self, v: f64) {
        self.inner.rho_p = v;
    }
    #[getter]
    fn gamma_p(&self) -> f64 {
        self.inner.gamma_p()
    }
    #[getter]
    fn epsilon_p(&self) -> f64 {
        self.inner.epsilon_p
    }
    #[setter]
    fn set_epsilon_p(&mut self, v: f64) {
        self.inner.epsilon_p = v;
    }
    #[getter]
    fn p(&self) -> f64 {
        self.inner.p
    }
    #[setter]
    fn set_p(&mut self, v: f64) {
        self.inner.p = v;
    }
    #[getter]
    fn leak_sign(&self) -> &'static str {
        self.inner.leak_sign.as_str()
    }
    #[setter]
    fn set_leak_sign(&mut self, v: &str) -> PyResult<()> {
        self.inner.leak_sign = parse::<LeakSign>(v)?;
        Ok(())
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "FilterParams(mu={}, gamma={}, rho_p={}, epsilon_p={}, p={}, leak_sign='{}')",
            p.mu,
            p.gamma,
            p.rho_p,
            p.epsilon_p,
            p.p,
            p.leak_sign.as_str()
        )
    }
}

#[pyclass(name = "UpdateResult", frozen, skip_from_py_object)]
struct PyUpdateResult {
    #[pyo3(get)]
    new_weights: Vec<f64>,
    #[pyo3(get)]
    error: f64,
    #[pyo3(get)]
    prediction: f64,
}

impl From<filter::UpdateResult> for PyUpdateResult {
    fn from(r: filter::UpdateResult) -> Self {
        PyUpdateResult {
            new_weights: r.new_weights,
            error: r.error,
            prediction: r.prediction,
        }
    }
}

#[pymethods]
impl PyUpdateResult {
    fn __repr__(&self) -> String {
        format!(
            "UpdateResult(new_weights={:?}, error={}, prediction={})",
            self.new_weights, self.error, self.prediction
        )
    }
}

fn run_update(
    algorithm: Algorithm,
    w: Vec<f64>,
    x: Vec<f64>,
    desired: f64,
    params: &PyFilterParams,
) -> PyResult<PyUpdateResult> {
    algorithm
        .update(&w, &x, desired, &params.inner)
        .map(Into::into)
        .map_err(to_py)
}

/// One update step of the named algorithm (`lms`, `llms`, `lp_lms`, `lp_llms`).
#[pyfunction]
fn update(
    algorithm: &str,
    w: Vec<f64>,
    x: Vec<f64>,
    desired: f64,
    params: PyRef<'_, PyFilterParams>,
) -> PyResult<PyUpdateResult> {
    run_update(parse(algorithm)?, w, x, desired, &params)
}

#[pyfunction]
fn lms_update(
    w: Vec<f64>,
    x: Vec<f64>,
    desired: f64,
    params: PyRef<'_, PyFilterParams>,
) -> PyResult<PyUpdateResult> {
    run_update(Algorithm::Lms, w, x, desired, &params)
}

#[pyfunction]
fn llms_update(
    w: Vec<f64>,
    x: Vec<f64>,
    desired: f64,
    params: PyRef<'_, PyFilterParams>,
) -> PyResult<PyUpdateResult> {
    run_update(Algorithm::Llms, w, x, desired, &params)
}

#[pyfunction]
fn lp_lms_update(
    w: Vec<f64>,
    x: Vec<f64>,
    desired: f64,
    params: PyRef<'_, PyFilterParams>,
) -> PyResult<PyUpdateResult> {
    run_update(Algorithm::LpLms, w, x, desired, &params)
}

#[pyfunction]
fn lp_llms_update(
    w: Vec<f64>,
    x: Vec<f64>,
    desired: f64,
    params: PyRef<'_, PyFilterParams>,
) -> PyResult<PyUpdateResult> {
    run_update(Algorithm::LpLlms, w, x, desired, &params)
}

#[pyfunction]
fn predict(w: Vec<f64>, x: Vec<f64>) -> PyResult<f64> {
    filter::predict(&w, &x).map_err(to_py)
}

#[pyfunction]
fn sgn(v: f64) -> f64 {
    filter::sgn(v)
}

#[pyfunction]
fn lp_norm(w: Vec<f64>, p: f64) -> PyResult<f64> {
    filter::lp_norm(&w, p).map_err(to_py)
}

#[pyfunction]
fn lp_penalty_gradient(w: Vec<f64>, p: f64, epsilon_p: f64) -> PyResult<Vec<f64>> {
    filter::lp_penalty_gradient(&w, p, epsilon_p).map_err(to_py)
}

#[pyfunction]
fn msd(true_w: Vec<f64>, est_w: Vec<f64>) -> PyResult<f64> {
    experiment::msd(&true_w, &est_w).map_err(to_py)
}

/// Returns `(lambda_max, 1 / lambda_max)` for the unit-variance AR(1) input.
#[pyfunction]
#[pyo3(signature = (a=0.8, n_taps=16))]
fn estimate_lambda_max(a: f64, n_taps: usize) -> PyResult<(f64, f64)> {
    let cfg = Ar1Config {
        a,
        ..Default::default()
    };
    let d = experiment::estimate_lambda_max(&cfg, n_taps).map_err(to_py)?;
    Ok((d.lambda_max, d.mu_bound))
}

#[pyfunction]
#[pyo3(signature = (length, seed, trial=0, a=0.8, innovation_variance=1e-3, normalize="theoretical"))]
fn gen_ar1_input(
    length: usize,
    seed: u64,
    trial: u64,
    a: f64,
    innovation_variance: f64,
    normalize: &str,
) -> PyResult<Vec<f64>> {
    let cfg = Ar1Config {
        a,
        innovation_variance,
        normalize: parse(normalize)?,
    };
    signal::gen_ar1_input(
        &cfg,
        length,
        RngStream::new(seed, trial, StreamPurpose::Input),
    )
    .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (length, seed, trial=0, variance=1e-2))]
fn gen_noise(length: usize, seed: u64, trial: u64, variance: f64) -> PyResult<Vec<f64>> {
    signal::gen_noise(
        &NoiseConfig { variance },
        length,
        RngStream::new(seed, trial, StreamPurpose::Noise),
    )
    .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n_taps, n_nonzero, seed, trial=0, phase=0))]
fn gen_sparse_system(
    n_taps: usize,
    n_nonzero: usize,
    seed: u64,
    trial: u64,
    phase: u16,
) -> PyResult<Vec<f64>> {
    signal::gen_sparse_system(
        &SparseSystemSpec { n_taps, n_nonzero },
        RngStream::new(seed, trial, StreamPurpose::System(phase)),
    )
    .map_err(to_py)
}

/// Reference schedule for one trial as `[(system, span, rho_p), ...]`.
#[pyfunction]
#[pyo3(signature = (seed, trial=0))]
fn build_paper_schedule(seed: u64, trial: u64) -> Vec<(Vec<f64>, usize, Option<f64>)> {
    signal::build_paper_schedule(seed, trial)
        .phases()
        .iter()
        .map(|p| (p.system.clone(), p.span, p.rho_p_override))
        .collect()
}

#[pyfunction]
fn synthesize_desired(system: Vec<f64>, x: Vec<f64>, noise_sample: f64) -> PyResult<f64> {
    signal::synthesize_desired(&system, &x, noise_sample).map_err(to_py)
}

#[pyclass(name = "ExperimentConfig", skip_from_py_object)]
#[derive(Clone)]
struct PyExperimentConfig {
    inner: experiment::ExperimentConfig,
}

#[pymethods]
impl PyExperimentConfig {
    /// Reference configuration.
    #[new]
    fn new() -> Self {
        PyExperimentConfig {
            inner: experiment::ExperimentConfig::paper(),
        }
    }

    /// Parses the flat `key = value` config format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyExperimentConfig {
            inner: io::parse_config(text).map_err(to_py)?,
        })
    }

    fn render(&self) -> PyResult<String> {
        io::render_config(&self.inner).map_err(to_py)
    }

    #[getter]
    fn n_trials(&self) -> usize {
        self.inner.n_trials
    }
    #[setter]
    fn set_n_trials(&mut self, v: usize) {
        self.inner.n_trials = v;
    }
    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }
    #[setter]
    fn set_seed(&mut self, v: u64) {
        self.inner.seed = v;
    }
    #[getter]
    fn steady_state_window(&self) -> usize {
        self.inner.steady_state_window
    }
    #[setter]
    fn set_steady_state_window(&mut self, v: usize) {
        self.inner.steady_state_window = v;
    }
    #[getter]
    fn algorithms(&self) -> Vec<String> {
        self.inner
            .algorithms
            .iter()
            .map(|a| a.name.clone())
            .collect()
    }
    #[getter]
    fn spans(&self) -> Vec<usize> {
        self.inner.schedule.spans()
    }

    /// Parameters of the named algorithm.
    fn params(&self, name: &str) -> PyResult<PyFilterParams> {
        self.inner
            .algorithms
            .iter()
            .find(|a| a.name == name)
            .map(|a| PyFilterParams { inner: a.params })
            .ok_or_else(|| PyValueError::new_err(format!("no algorithm named `{name}`")))
    }

    fn __repr__(&self) -> String {
        format!(
            "ExperimentConfig(n_trials={}, seed={}, algorithms={:?}, spans={:?})",
            self.inner.n_trials,
            self.inner.seed,
            self.algorithms(),
            self.spans()
        )
    }
}

#[pyclass(name = "ExperimentResult", frozen, skip_from_py_object)]
struct PyExperimentResult {
    inner: experiment::ExperimentResult,
}

#[pymethods]
impl PyExperimentResult {
    /// `{name: [msd per iteration]}`.
    #[getter]
    fn curves(&self) -> BTreeMap<String, Vec<f64>> {
        self.inner
            .curves
            .iter()
            .map(|c| (c.name.clone(), c.values.clone()))
            .collect()
    }

    #[getter]
    fn trials_used(&self) -> BTreeMap<String, usize> {
        self.inner
            .curves
            .iter()
            .map(|c| (c.name.clone(), c.n_trials_used))
            .collect()
    }

    /// Per phase, `{name: (linear, db)}`.
    #[getter]
    fn steady_state(&self) -> Vec<BTreeMap<String, (f64, Option<f64>)>> {
        self.inner
            .report
            .phases
            .iter()
            .map(|p| {
                p.entries
                    .iter()
                    .map(|e| (e.name.clone(), (e.linear, e.db)))
                    .collect()
            })
            .collect()
    }

    /// Algorithm names from lowest to highest steady-state MSD.
    fn ranking(&self, phase: usize) -> PyResult<Vec<String>> {
        let p = self
            .inner
            .report
            .phases
            .get(phase)
            .ok_or_else(|| PyValueError::new_err(format!("no phase {phase}")))?;
        Ok(p.ranking().into_iter().map(|e| e.name.clone()).collect())
    }

    fn to_csv(&self) -> PyResult<String> {
        io::curve_csv_string(&self.inner.curves).map_err(to_py)
    }
}

/// Runs the Monte-Carlo experiment with the GIL released.
#[pyfunction]
#[pyo3(signature = (config, serial=false))]
fn run_experiment(
    py: Python<'_>,
    config: PyRef<'_, PyExperimentConfig>,
    serial: bool,
) -> PyResult<PyExperimentResult> {
    let cfg = config.inner.clone();
    let mode = if serial {
        ExecutionMode::Serial
    } else {
        ExecutionMode::Parallel
    };
    let inner = py
        .detach(move || experiment::run_experiment_with(&cfg, mode))
        .map_err(to_py)?;
    Ok(PyExperimentResult { inner })
}

#[pymodule]
fn sparse_lms_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFilterParams>()?;
    m.add_class::<PyUpdateResult>()?;
    m.add_class::<PyExperimentConfig>()?;
    m.add_class::<PyExperimentResult>()?;
    m.add_function(wrap_pyfunction!(update, m)?)?;
    m.add_function(wrap_pyfunction!(lms_update, m)?)?;
    m.add_function(wrap_pyfunction!(llms_update, m)?)?;
    m.add_function(wrap_pyfunction!(lp_lms_update, m)?)?;
    m.add_function(wrap_pyfunction!(lp_llms_update, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(sgn, m)?)?;
    m.add_function(wrap_pyfunction!(lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(lp_penalty_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(msd, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_lambda_max, m)?)?;
    m.add_function(wrap_pyfunction!(gen_ar1_input, m)?)?;
    m.add_function(wrap_pyfunction!(gen_noise, m)?)?;
    m.add_function(wrap_pyfunction!(gen_sparse_system, m)?)?;
    m.add_function(wrap_pyfunction!(build_paper_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_desired, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
