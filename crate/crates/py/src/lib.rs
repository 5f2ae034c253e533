//! Python bindings for the schwinger-thermal simulator.
//!
//! Exposes the model builder, the product-spectrum ansatz parameters, the
//! exact-diagonalization thermodynamics and the variational minimizer:
//!
//! ```python
//! import schwinger_thermal_py as st
//!
//! params = st.SchwingerParams(6, epsilon=0.5)
//! h = params.hamiltonian()
//! f, e, s = st.exact_free_energy(h, beta=1.0)
//! sigma = st.exact_string_tension(params, beta=1.0)
//! result = st.minimize(h, beta=1.0, depth=2, restarts=4, seed=7)
//! ```

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use schwinger_thermal::ansatz;
use schwinger_thermal::optimizer::{self, ObjectiveSpec, OptimizerConfig, OptimizerKind};
use schwinger_thermal::oracle;
use schwinger_thermal::Error;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::InvalidParams(_) | Error::Config(_) | Error::DimensionMismatch(_) => {
            PyValueError::new_err(err.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Physical specification of one lattice Schwinger Hamiltonian instance.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct SchwingerParams {
    inner: schwinger_thermal::SchwingerParams,
}

#[pymethods]
impl SchwingerParams {
    /// Supply the lattice scale through `a` or `hopping` (default a = 0.5,
    /// i.e. hopping 1); giving both checks consistency.
    #[new]
    #[pyo3(signature = (n, m=1.0, g=1.0, a=None, hopping=None, epsilon=0.0, mu=0.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n: usize,
        m: f64,
        g: f64,
        a: Option<f64>,
        hopping: Option<f64>,
        epsilon: f64,
        mu: f64,
    ) -> PyResult<Self> {
        use schwinger_thermal::SchwingerParams as Inner;
        let inner = match (a, hopping) {
            (Some(a), Some(w)) => Inner::checked(n, m, g, a, w, epsilon, mu),
            (Some(a), None) => Inner::from_spacing(n, m, g, a, epsilon, mu),
            (None, Some(w)) => Inner::from_hopping(n, m, g, w, epsilon, mu),
            (None, None) => Inner::from_spacing(n, m, g, 0.5, epsilon, mu),
        }
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n_sites(&self) -> usize {
        self.inner.n_sites()
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    #[getter]
    fn coupling(&self) -> f64 {
        self.inner.coupling()
    }

    #[getter]
    fn lattice_spacing(&self) -> f64 {
        self.inner.lattice_spacing()
    }

    #[getter]
    fn hopping(&self) -> f64 {
        self.inner.hopping()
    }

    #[getter]
    fn background_field(&self) -> f64 {
        self.inner.background_field()
    }

    #[getter]
    fn chemical_potential(&self) -> f64 {
        self.inner.chemical_potential()
    }

    fn with_background_field(&self, epsilon: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_background_field(epsilon).map_err(to_py_err)?,
        })
    }

    fn with_chemical_potential(&self, mu: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self
                .inner
                .with_chemical_potential(mu)
                .map_err(to_py_err)?,
        })
    }

    /// The qubit Hamiltonian G_ε(μ) as a canonical Pauli sum.
    fn hamiltonian(&self) -> PauliSum {
        PauliSum {
            inner: self.inner.hamiltonian(),
        }
    }

    /// The resolved electric field on link `j` (1-based).
    fn electric_field_operator(&self, j: usize) -> PyResult<PauliSum> {
        Ok(PauliSum {
            inner: self.inner.electric_field_operator(j).map_err(to_py_err)?,
        })
    }

    /// Trial-charge offset f_ε (the ε-only electric contribution).
    fn trial_charge_offset(&self) -> f64 {
        self.inner.trial_charge_offset()
    }

    fn __repr__(&self) -> String {
        format!(
            "SchwingerParams(n={}, m={}, g={}, a={}, epsilon={}, mu={})",
            self.inner.n_sites(),
            self.inner.mass(),
            self.inner.coupling(),
            self.inner.lattice_spacing(),
            self.inner.background_field(),
            self.inner.chemical_potential()
        )
    }
}

/// A canonical real-weighted sum of Pauli strings.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct PauliSum {
    inner: schwinger_thermal::PauliSum,
}

#[pymethods]
impl PauliSum {
    #[getter]
    fn n_sites(&self) -> usize {
        self.inner.n_sites()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// `[(coefficient, "ZZIIII"), ...]` in canonical order.
    fn terms(&self) -> Vec<(f64, String)> {
        self.inner
            .terms()
            .iter()
            .map(|t| (t.coefficient(), t.op_string()))
            .collect()
    }

    /// The term-dump text used by the CLI `terms` subcommand.
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    /// Dense Hermitian matrix as nested lists of complex numbers.
    fn to_dense(&self) -> PyResult<Vec<Vec<num_complex::Complex<f64>>>> {
        let m = self.inner.to_dense().map_err(to_py_err)?;
        Ok((0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "PauliSum(n_sites={}, terms={})",
            self.inner.n_sites(),
            self.inner.len()
        )
    }
}

/// Variational parameter set ω = (θ, φ) of the product-spectrum ansatz.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct AnsatzParams {
    inner: schwinger_thermal::AnsatzParams,
}

#[pymethods]
impl AnsatzParams {
    #[getter]
    fn n_sites(&self) -> usize {
        self.inner.n_sites()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    #[getter]
    fn theta(&self) -> Vec<f64> {
        self.inner.theta().to_vec()
    }

    /// Checkpoint document `{"theta": [...], "blocks": [...]}`.
    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: schwinger_thermal::AnsatzParams::from_json(text).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn zeros(n: usize, depth: usize) -> PyResult<Self> {
        Ok(Self {
            inner: schwinger_thermal::AnsatzParams::zeros(n, depth).map_err(to_py_err)?,
        })
    }

    /// Eigenvalues of the realized density matrix ρ(ω), ascending.
    fn state_eigenvalues(&self) -> Vec<f64> {
        ansatz::realize_state(&self.inner).eigenvalues()
    }

    fn __repr__(&self) -> String {
        format!(
            "AnsatzParams(n_sites={}, depth={})",
            self.inner.n_sites(),
            self.inner.depth()
        )
    }
}

/// Best variational free energy with optimizer metadata.
#[pyclass(frozen, skip_from_py_object)]
struct ThermalResult {
    inner: schwinger_thermal::ThermalResult,
}

#[pymethods]
impl ThermalResult {
    #[getter]
    fn free_energy(&self) -> f64 {
        self.inner.free_energy
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn entropy(&self) -> f64 {
        self.inner.entropy
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn restarts_used(&self) -> usize {
        self.inner.restarts_used
    }

    #[getter]
    fn params(&self) -> AnsatzParams {
        AnsatzParams {
            inner: self.inner.params.clone(),
        }
    }

    /// `(iteration, F)` pairs of the winning restart.
    #[getter]
    fn trace(&self) -> Vec<(usize, f64)> {
        self.inner.trace.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "ThermalResult(free_energy={}, converged={})",
            self.inner.free_energy, self.inner.converged
        )
    }
}

/// Exact `(F, E, S)` of a Hamiltonian at inverse temperature β.
#[pyfunction]
#[pyo3(signature = (hamiltonian, beta))]
fn exact_free_energy(hamiltonian: &PauliSum, beta: f64) -> PyResult<(f64, f64, f64)> {
    let t = oracle::exact_free_energy(&hamiltonian.inner, beta).map_err(to_py_err)?;
    Ok((t.free_energy, t.energy, t.entropy))
}

/// Exact string tension σ_ε(β) = (F_ε − F₀ − f_ε)/(N g a).
#[pyfunction]
#[pyo3(signature = (params, beta))]
fn exact_string_tension(params: &SchwingerParams, beta: f64) -> PyResult<f64> {
    oracle::exact_string_tension(&params.inner, beta).map_err(to_py_err)
}

/// Analytic entropy (nats) of the product mixed state with mixing angles θ.
#[pyfunction]
fn entropy(theta: Vec<f64>) -> f64 {
    ansatz::entropy(&theta)
}

/// Variational `(F, E, S)` at explicit ansatz parameters.
#[pyfunction]
#[pyo3(signature = (hamiltonian, beta, params))]
fn objective(
    hamiltonian: &PauliSum,
    beta: f64,
    params: &AnsatzParams,
) -> PyResult<(f64, f64, f64)> {
    let spec = ObjectiveSpec::new(hamiltonian.inner.clone(), beta).map_err(to_py_err)?;
    optimizer::objective(&spec, &params.inner).map_err(to_py_err)
}

/// Minimize the variational free energy.
#[pyfunction]
#[pyo3(signature = (hamiltonian, beta, depth=2, restarts=8, max_iters=2000, tol=1e-7, step=0.05, optimizer="gradient", seed=42))]
#[allow(clippy::too_many_arguments)]
fn minimize(
    hamiltonian: &PauliSum,
    beta: f64,
    depth: usize,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    step: f64,
    optimizer: &str,
    seed: u64,
) -> PyResult<ThermalResult> {
    let kind = match optimizer {
        "gradient" => OptimizerKind::Gradient,
        "simplex" => OptimizerKind::Simplex,
        other => {
            return Err(PyValueError::new_err(format!(
                "optimizer must be 'gradient' or 'simplex', got '{other}'"
            )))
        }
    };
    let spec = ObjectiveSpec::new(hamiltonian.inner.clone(), beta).map_err(to_py_err)?;
    let config = OptimizerConfig {
        depth,
        restarts,
        max_iters,
        tol,
        step,
        optimizer: kind,
        seed,
    };
    Ok(ThermalResult {
        inner: optimizer::minimize(&spec, &config).map_err(to_py_err)?,
    })
}

#[pymodule]
fn schwinger_thermal_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SchwingerParams>()?;
    m.add_class::<PauliSum>()?;
    m.add_class::<AnsatzParams>()?;
    m.add_class::<ThermalResult>()?;
    m.add_function(wrap_pyfunction!(exact_free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(exact_string_tension, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(objective, m)?)?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    Ok(())
}
