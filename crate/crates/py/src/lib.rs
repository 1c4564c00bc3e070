//! Python bindings for the thermal-state bounds library.
//!
//! The module mirrors the Rust surface at the level a notebook needs:
//! build canonical or grand-canonical specs from nested lists, read exact
//! values and two-sided bounds, and reach the qubit / oscillator closed
//! forms plus the truncated number-basis oracle for cross-checks.
//!
//! Validation problems (bad shapes, non-Hermitian input, out-of-domain
//! parameters) raise `ValueError`; internal numerical failures raise
//! `RuntimeError`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use thermobound as tb;

fn py_err(e: tb::Error) -> PyErr {
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_operator(rows: Vec<Vec<Complex64>>) -> PyResult<tb::HermitianOperator> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square and non-empty"));
    }
    let mat = tb::CMatrix::from_fn(n, n, |i, j| rows[i][j]);
    tb::HermitianOperator::new(mat).map_err(py_err)
}

fn matrix_rows(m: &tb::CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Lower/exact/upper triple with the relative-entropy slacks.
#[pyclass(frozen, name = "BoundsResult")]
struct PyBoundsResult {
    #[pyo3(get)]
    lower: f64,
    #[pyo3(get)]
    exact: Option<f64>,
    #[pyo3(get)]
    upper: f64,
    #[pyo3(get)]
    slack_lower: Option<f64>,
    #[pyo3(get)]
    slack_upper: Option<f64>,
    #[pyo3(get)]
    validated: bool,
}

#[pymethods]
impl PyBoundsResult {
    fn __repr__(&self) -> String {
        match self.exact {
            Some(e) => format!(
                "BoundsResult(lower={:.6e}, exact={:.6e}, upper={:.6e})",
                self.lower, e, self.upper
            ),
            None => format!("BoundsResult(lower={:.6e}, upper={:.6e})", self.lower, self.upper),
        }
    }

    /// `(lower, exact, upper)` for quick unpacking.
    fn as_tuple(&self) -> (f64, Option<f64>, f64) {
        (self.lower, self.exact, self.upper)
    }
}

impl From<tb::BoundsResult> for PyBoundsResult {
    fn from(b: tb::BoundsResult) -> Self {
        Self {
            lower: b.lower,
            exact: b.exact,
            upper: b.upper,
            slack_lower: b.slack_lower,
            slack_upper: b.slack_upper,
            validated: b.validated,
        }
    }
}

/// A Hermitian operator with a temperature: everything a canonical Gibbs
/// state needs.
#[pyclass(frozen, name = "ThermalSpec")]
struct PyThermalSpec {
    inner: tb::ThermalSpec,
}

#[pymethods]
impl PyThermalSpec {
    #[new]
    fn new(h: Vec<Vec<Complex64>>, temperature: f64) -> PyResult<Self> {
        let op = to_operator(h)?;
        Ok(Self { inner: tb::ThermalSpec::new(op, temperature).map_err(py_err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn temperature(&self) -> f64 {
        self.inner.temperature()
    }

    /// Hamiltonian back as nested lists of complex numbers.
    fn hamiltonian(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(self.inner.hamiltonian().matrix())
    }

    fn entropy(&self) -> PyResult<f64> {
        Ok(tb::gibbs_state(&self.inner).map_err(py_err)?.entropy())
    }

    fn energy(&self) -> PyResult<f64> {
        Ok(tb::gibbs_state(&self.inner).map_err(py_err)?.energy())
    }

    fn ln_z(&self) -> PyResult<f64> {
        Ok(tb::gibbs_state(&self.inner).map_err(py_err)?.ln_z())
    }

    /// Serialize to the same JSON schema the command-line tool reads.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }
}

/// Canonical spec extended with a number operator and chemical potential.
#[pyclass(frozen, name = "GrandThermalSpec")]
struct PyGrandThermalSpec {
    inner: tb::GrandThermalSpec,
}

#[pymethods]
impl PyGrandThermalSpec {
    #[new]
    fn new(
        h: Vec<Vec<Complex64>>,
        n: Vec<Vec<Complex64>>,
        temperature: f64,
        mu: f64,
    ) -> PyResult<Self> {
        let h = to_operator(h)?;
        let n = to_operator(n)?;
        Ok(Self { inner: tb::GrandThermalSpec::new(h, n, temperature, mu).map_err(py_err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn temperature(&self) -> f64 {
        self.inner.temperature()
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu()
    }

    fn entropy(&self) -> PyResult<f64> {
        Ok(tb::grand_gibbs_state(&self.inner).map_err(py_err)?.entropy())
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }
}

#[pyfunction]
fn delta_s_bounds(s1: PyRef<'_, PyThermalSpec>, s2: PyRef<'_, PyThermalSpec>) -> PyResult<PyBoundsResult> {
    Ok(tb::thermal::delta_s_bounds(&s1.inner, &s2.inner).map_err(py_err)?.into())
}

#[pyfunction]
fn log_z_ratio_bounds(
    s1: PyRef<'_, PyThermalSpec>,
    s2: PyRef<'_, PyThermalSpec>,
) -> PyResult<PyBoundsResult> {
    Ok(tb::thermal::log_z_ratio_bounds(&s1.inner, &s2.inner).map_err(py_err)?.into())
}

#[pyfunction]
fn helmholtz_bounds(
    s1: PyRef<'_, PyThermalSpec>,
    s2: PyRef<'_, PyThermalSpec>,
) -> PyResult<PyBoundsResult> {
    Ok(tb::thermal::helmholtz_bounds(&s1.inner, &s2.inner).map_err(py_err)?.into())
}

#[pyfunction]
fn grand_delta_s_bounds(
    g1: PyRef<'_, PyGrandThermalSpec>,
    g2: PyRef<'_, PyGrandThermalSpec>,
) -> PyResult<PyBoundsResult> {
    Ok(tb::thermal::grand_delta_s_bounds(&g1.inner, &g2.inner).map_err(py_err)?.into())
}

#[pyfunction]
fn grand_log_z_ratio_bounds(
    g1: PyRef<'_, PyGrandThermalSpec>,
    g2: PyRef<'_, PyGrandThermalSpec>,
) -> PyResult<PyBoundsResult> {
    Ok(tb::thermal::grand_log_z_ratio_bounds(&g1.inner, &g2.inner).map_err(py_err)?.into())
}

/// Relative entropy `D(rho1 || rho2)` between the two Gibbs states.
#[pyfunction]
fn relative_entropy(
    s1: PyRef<'_, PyThermalSpec>,
    s2: PyRef<'_, PyThermalSpec>,
) -> PyResult<f64> {
    let b = tb::thermal::delta_s_bounds(&s1.inner, &s2.inner).map_err(py_err)?;
    b.slack_lower
        .ok_or_else(|| PyRuntimeError::new_err("slack unavailable for this route"))
}

/// Entropy-difference bounds for two-level systems given the field norms,
/// the cosine of the angle between the fields, and the temperatures.
#[pyfunction]
fn qubit_bounds(
    norm1: f64,
    norm2: f64,
    cos_theta: f64,
    t1: f64,
    t2: f64,
) -> PyResult<PyBoundsResult> {
    Ok(tb::qubit::bounds_from_polar(norm1, norm2, cos_theta, t1, t2).map_err(py_err)?.into())
}

/// Closed-form entropy of a harmonic oscillator at frequency `omega`.
#[pyfunction]
fn entropy_oscillator(omega: f64, temperature: f64) -> PyResult<f64> {
    tb::oscillator::entropy_oscillator(omega, temperature).map_err(py_err)
}

/// Closed-form thermal cross mean for a pair of frequencies.
#[pyfunction]
fn cross_mean_frequencies(omega_t: f64, omega_tprime: f64, temperature: f64) -> PyResult<f64> {
    tb::oscillator::cross_mean_frequencies(omega_t, omega_tprime, temperature).map_err(py_err)
}

/// Same quantity from the truncated number-basis oracle with `n` levels.
#[pyfunction]
#[pyo3(signature = (omega_t, omega_tprime, temperature, n = 400))]
fn fock_cross_mean(
    omega_t: f64,
    omega_tprime: f64,
    temperature: f64,
    n: usize,
) -> PyResult<f64> {
    Ok(tb::oscillator::fock_oracle_frequencies(omega_t, omega_tprime, temperature, n)
        .map_err(py_err)?
        .cross_mean)
}

/// Entropy-difference bounds between two instants of a driven oscillator.
///
/// `profile` is one of `"constant"`, `"sqrt_linear"`, `"paul_trap"`.
#[pyfunction]
#[pyo3(signature = (profile, t, tprime, t1, t2, omega0 = 1.0, eta = 0.0, drive = 2.0))]
#[allow(clippy::too_many_arguments)]
fn oscillator_bounds(
    profile: &str,
    t: f64,
    tprime: f64,
    t1: f64,
    t2: f64,
    omega0: f64,
    eta: f64,
    drive: f64,
) -> PyResult<PyBoundsResult> {
    let p = match profile {
        "constant" => tb::oscillator::FrequencyProfile::constant(omega0),
        "sqrt_linear" => tb::oscillator::FrequencyProfile::sqrt_linear(omega0, eta),
        "paul_trap" => tb::oscillator::FrequencyProfile::paul_trap(omega0, eta, drive),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown profile '{other}'; expected constant, sqrt_linear or paul_trap"
            )))
        }
    }
    .map_err(py_err)?;
    Ok(tb::oscillator::delta_s_bounds_physical(&p, t, tprime, t1, t2).map_err(py_err)?.into())
}

#[pymodule]
fn thermobound_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyThermalSpec>()?;
    m.add_class::<PyGrandThermalSpec>()?;
    m.add_class::<PyBoundsResult>()?;
    m.add_function(wrap_pyfunction!(delta_s_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(log_z_ratio_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(helmholtz_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(grand_delta_s_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(grand_log_z_ratio_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(relative_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_oscillator, m)?)?;
    m.add_function(wrap_pyfunction!(cross_mean_frequencies, m)?)?;
    m.add_function(wrap_pyfunction!(fock_cross_mean, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_bounds, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyList;

    // One test drives the whole module through a real interpreter; keeping
    // it single avoids racing the one-shot inittab registration.
    #[test]
    fn module_round_trips_through_python() {
        pyo3::append_to_inittab!(thermobound_py);
        Python::attach(|py| {
            let m = py.import("thermobound_py").expect("module imports");

            let code = std::ffi::CString::new(concat!(
                "import thermobound_py as tb\n",
                "s1 = tb.ThermalSpec([[1.0, 0.3], [0.3, -1.0]], 2.0)\n",
                "s2 = tb.ThermalSpec([[0.5, 0.1j], [-0.1j, -0.5]], 5.0)\n",
                "b = tb.delta_s_bounds(s1, s2)\n",
                "assert b.lower <= b.exact <= b.upper\n",
                "assert b.validated\n",
                "s1b = tb.ThermalSpec.from_json(s1.to_json())\n",
                "b2 = tb.delta_s_bounds(s1b, s2)\n",
                "assert b2.exact == b.exact\n",
                "ok = True\n",
            ))
            .unwrap();
            let globals = pyo3::types::PyDict::new(py);
            py.run(code.as_c_str(), Some(&globals), None).expect("python side runs");
            assert!(globals.get_item("ok").unwrap().unwrap().extract::<bool>().unwrap());

            // Closed form vs oracle through the bound functions.
            let closed: f64 = m
                .getattr("cross_mean_frequencies")
                .unwrap()
                .call1((1.7, 1.3, 2.0))
                .unwrap()
                .extract()
                .unwrap();
            let oracle: f64 = m
                .getattr("fock_cross_mean")
                .unwrap()
                .call1((1.7, 1.3, 2.0))
                .unwrap()
                .extract()
                .unwrap();
            assert!((closed - oracle).abs() < 1e-6);

            // Validation errors arrive as ValueError.
            let bad = m
                .getattr("ThermalSpec")
                .unwrap()
                .call1((PyList::new(py, [PyList::new(py, [1.0]).unwrap()]).unwrap(), -1.0));
            assert!(bad.unwrap_err().is_instance_of::<PyValueError>(py));
        });
    }
}
