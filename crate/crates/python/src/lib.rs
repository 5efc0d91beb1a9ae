//! Python bindings: scenarios, pipelines and the special functions.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use trap_lab::classical::beta_sweep;
use trap_lab::pipeline;
use trap_lab::scenario::{preset_names, Scenario};
use trap_lab::specfun;
use trap_lab::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_config() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// A parsed scenario file.
#[pyclass(name = "Scenario", frozen)]
struct PyScenario {
    inner: Scenario,
}

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Scenario::preset(name).map(|inner| PyScenario { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Scenario::from_json(text).map(|inner| PyScenario { inner }).map_err(to_py)
    }

    #[getter]
    fn id(&self) -> &str {
        &self.inner.id
    }

    #[getter]
    fn config_sha256(&self) -> &str {
        &self.inner.config_sha256
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant.to_string()
    }

    /// `{"alpha", "beta", "gamma", "kappa_z", "m"}`.
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = &self.inner.params;
        let d = PyDict::new(py);
        d.set_item("alpha", p.alpha)?;
        d.set_item("beta", p.beta)?;
        d.set_item("gamma", p.gamma)?;
        d.set_item("kappa_z", p.kappa_z)?;
        d.set_item("m", p.m)?;
        Ok(d)
    }

    /// Channel curves on the scenario grid, one list per column.
    fn potentials<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = &self.inner;
        let dec = py.detach(|| pipeline::potentials(&s.params, s.variant, &s.grid)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("xi", dec.grid)?;
        d.set_item("theta", dec.theta)?;
        d.set_item("lambda", dec.lambda)?;
        d.set_item("v_plus", dec.v_plus)?;
        d.set_item("v_minus", dec.v_minus)?;
        d.set_item("v_tilde_plus", dec.v_tilde_plus)?;
        d.set_item("v_tilde_minus", dec.v_tilde_minus)?;
        d.set_item("w0_mult", dec.w0_mult)?;
        d.set_item("w0_deriv", dec.w0_deriv)?;
        Ok(d)
    }

    #[pyo3(signature = (count=None))]
    fn bound_states<'py>(&self, py: Python<'py>, count: Option<usize>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let s = &self.inner;
        let n = count.unwrap_or(s.bound_states);
        let (_, states) = py.detach(|| pipeline::bound_states(&s.params, s.variant, &s.grid, n)).map_err(to_py)?;
        states
            .into_iter()
            .map(|st| {
                let d = PyDict::new(py);
                d.set_item("energy", st.energy)?;
                d.set_item("nodes", st.nodes)?;
                d.set_item("grid_step", st.grid_step)?;
                d.set_item("xi", st.grid)?;
                d.set_item("u", st.u)?;
                Ok(d)
            })
            .collect()
    }

    fn tunneling<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = &self.inner;
        let r = py.detach(|| pipeline::tunneling(&s.id, &s.params, s.variant, &s.grid, s.z_w)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("scenario", r.scenario)?;
        for (k, v) in [
            ("energy", r.energy),
            ("v_max", r.v_max),
            ("v_min", r.v_min),
            ("xi_d", r.xi_d),
            ("theta_bound", r.theta_bound),
            ("hits_per_omega", r.hits_per_omega),
            ("barrier_rate", r.barrier_rate),
            ("channel_rate", r.channel_rate),
            ("z_w", r.z_w),
            ("log10_theta_bound", r.log10_theta_bound),
            ("log10_barrier_rate", r.log10_barrier_rate),
            ("airy_energy", r.airy_energy),
        ] {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    /// Stability metrics for each β of the classical block.
    fn classical_sweep<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let s = &self.inner;
        let spec = s
            .classical
            .as_ref()
            .ok_or_else(|| PyValueError::new_err(format!("scenario `{}` has no classical block", s.id)))?;
        let metrics = py
            .detach(|| {
                let model = s.classical_model()?;
                let init = spec.initial_state(&model)?;
                beta_sweep(&spec.betas, &init, &model, spec.dt, spec.steps, spec.escape_radius)
            })
            .map_err(to_py)?;
        metrics
            .into_iter()
            .map(|m| {
                let d = PyDict::new(py);
                d.set_item("beta", m.beta)?;
                d.set_item("radial_spread", m.radial_spread)?;
                d.set_item("circularity", m.circularity)?;
                d.set_item("escaped", m.escaped)?;
                Ok(d)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Scenario(id={:?}, variant={})", self.inner.id, self.inner.variant)
    }
}

/// Names of the embedded scenarios.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    preset_names().collect()
}

/// `(Ai, Ai′, Bi, Bi′)` at `x`.
#[pyfunction]
fn airy(x: f64) -> PyResult<(f64, f64, f64, f64)> {
    let q = specfun::airy_eval(x).map_err(to_py)?;
    Ok((q.ai, q.ai_prime, q.bi, q.bi_prime))
}

/// The n-th zero of Ai, counting from 1.
#[pyfunction]
fn airy_zero(n: usize) -> PyResult<f64> {
    specfun::airy_ai_zero(n).map_err(to_py)
}

#[pyfunction]
fn bessel_j(n: i32, x: f64) -> PyResult<f64> {
    specfun::bessel_j(n, x).map_err(to_py)
}

#[pymodule]
fn trap_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(airy, m)?)?;
    m.add_function(wrap_pyfunction!(airy_zero, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    Ok(())
}
