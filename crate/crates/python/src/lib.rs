//! Python bindings: `import adaptroot`.

use adaptroot_core::knapsack as ks;
use adaptroot_core::pellet as pl;
use adaptroot_core::secular::{self as sec, Method};
use adaptroot_core::{Error, IterationTrace};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(adaptroot, ConvergenceError, PyRuntimeError, "A solver stopped without converging.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::MaxIters(_) | Error::Breakdown(_) => ConvergenceError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "SolverConfig", module = "adaptroot", from_py_object)]
#[derive(Clone, Copy)]
pub struct PySolverConfig {
    #[pyo3(get, set)]
    f_tol: f64,
    #[pyo3(get, set)]
    step_tol: f64,
    #[pyo3(get, set)]
    max_iters: usize,
    #[pyo3(get, set)]
    inner_tol: f64,
}

impl PySolverConfig {
    fn core(&self) -> PyResult<adaptroot_core::SolverConfig> {
        let cfg = adaptroot_core::SolverConfig {
            f_tol: self.f_tol,
            step_tol: self.step_tol,
            max_iters: self.max_iters,
            inner_tol: self.inner_tol,
        };
        cfg.validate().map_err(to_py)?;
        Ok(cfg)
    }
}

#[pymethods]
impl PySolverConfig {
    #[new]
    #[pyo3(signature = (f_tol=None, step_tol=None, max_iters=None, inner_tol=None))]
    fn new(f_tol: Option<f64>, step_tol: Option<f64>, max_iters: Option<usize>, inner_tol: Option<f64>) -> PyResult<Self> {
        let d = adaptroot_core::SolverConfig::default();
        let cfg = PySolverConfig {
            f_tol: f_tol.unwrap_or(d.f_tol),
            step_tol: step_tol.unwrap_or(d.step_tol),
            max_iters: max_iters.unwrap_or(d.max_iters),
            inner_tol: inner_tol.unwrap_or(d.inner_tol),
        };
        cfg.core()?;
        Ok(cfg)
    }

    fn __repr__(&self) -> String {
        format!(
            "SolverConfig(f_tol={:e}, step_tol={:e}, max_iters={}, inner_tol={:e})",
            self.f_tol, self.step_tol, self.max_iters, self.inner_tol
        )
    }
}

fn config(cfg: Option<PySolverConfig>) -> PyResult<adaptroot_core::SolverConfig> {
    match cfg {
        Some(c) => c.core(),
        None => Ok(adaptroot_core::SolverConfig::default()),
    }
}

/// Iterates of one run, in the problem's own variable.
#[pyclass(name = "Trace", module = "adaptroot", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyTrace {
    inner: IterationTrace,
}

#[pymethods]
impl PyTrace {
    /// `[(x_k, f(x_k)), ...]`.
    #[getter]
    fn iterates(&self) -> Vec<(f64, f64)> {
        self.inner.iterates.clone()
    }

    #[getter]
    fn xs(&self) -> Vec<f64> {
        self.inner.xs().collect()
    }

    /// One of "Converged", "MaxIters", "LeftDomain", "Breakdown".
    #[getter]
    fn termination(&self) -> String {
        self.inner.termination.to_string()
    }

    #[getter]
    fn root(&self) -> Option<f64> {
        self.inner.root
    }

    #[getter]
    fn steps(&self) -> usize {
        self.inner.steps
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged()
    }

    #[getter]
    fn escaped(&self) -> Option<f64> {
        self.inner.escaped
    }

    /// Empirical convergence order against a reference root.
    fn order(&self, reference_root: f64) -> PyResult<f64> {
        adaptroot_core::estimate_order(&self.inner, reference_root).map(|e| e.q).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.iterates.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trace(termination={}, steps={}, root={:?})",
            self.inner.termination, self.inner.steps, self.inner.root
        )
    }
}

fn trace(inner: IterationTrace) -> PyTrace {
    PyTrace { inner }
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(to_py)
}

/// `f(x) = 1 + Σ b_j/(d_j − x)` with positive `b` and increasing `d`.
#[pyclass(name = "SecularProblem", module = "adaptroot", frozen, skip_from_py_object)]
pub struct PySecular {
    inner: sec::SecularProblem,
}

#[pymethods]
impl PySecular {
    #[new]
    fn new(b: Vec<f64>, d: Vec<f64>) -> PyResult<Self> {
        Ok(PySecular {
            inner: sec::SecularProblem::new(b, d).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn b(&self) -> Vec<f64> {
        self.inner.b().to_vec()
    }

    #[getter]
    fn d(&self) -> Vec<f64> {
        self.inner.d().to_vec()
    }

    fn eval(&self, x: f64) -> PyResult<f64> {
        self.inner.eval_f(x).map_err(to_py)
    }

    fn deriv(&self, x: f64) -> PyResult<f64> {
        self.inner.eval_deriv(x).map_err(to_py)
    }

    /// Root in `(d[i], d[i+1])`; `method` is "bns", "transformed" or "newton".
    #[pyo3(signature = (i, method="bns", config=None))]
    fn solve_root(&self, i: usize, method: &str, config: Option<PySolverConfig>) -> PyResult<PyTrace> {
        let m = self::method(method)?;
        let cfg = self::config(config)?;
        let r = self.inner.solve_root(i, m, &cfg).map_err(to_py)?;
        Ok(trace(r.trace()))
    }

    /// All interior roots, solved in parallel, in index order.
    #[pyo3(signature = (method="bns", config=None))]
    fn solve_all_roots(&self, py: Python<'_>, method: &str, config: Option<PySolverConfig>) -> PyResult<Vec<PyTrace>> {
        let m = self::method(method)?;
        let cfg = self::config(config)?;
        let results = py.detach(|| self.inner.solve_all_roots(m, &cfg)).map_err(to_py)?;
        results.into_iter().map(|r| r.map(|r| trace(r.trace())).map_err(to_py)).collect()
    }
}

/// `h(y) = 1 − (1 + 1/y) e^{−1/y}`.
#[pyfunction]
fn h(y: f64) -> PyResult<f64> {
    ks::h_eval(y).map_err(to_py)
}

/// Inverse of `h` on `(0, 1)`.
#[pyfunction]
#[pyo3(signature = (x, config=None))]
fn phi(x: f64, config: Option<PySolverConfig>) -> PyResult<f64> {
    let cfg = self::config(config)?;
    ks::phi_eval(x, &cfg).map(|v| v.y).map_err(to_py)
}

/// Dual equation `Σ α_j φ(β_j x) = K` on `(0, 1/max β)`.
#[pyclass(name = "KnapsackDual", module = "adaptroot", frozen, skip_from_py_object)]
pub struct PyKnapsack {
    inner: ks::KnapsackDual,
}

#[pymethods]
impl PyKnapsack {
    #[new]
    fn new(alpha: Vec<f64>, beta: Vec<f64>, budget: f64) -> PyResult<Self> {
        Ok(PyKnapsack {
            inner: ks::KnapsackDual::new(alpha, beta, budget).map_err(to_py)?,
        })
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    #[pyo3(signature = (x, config=None))]
    fn eval(&self, x: f64, config: Option<PySolverConfig>) -> PyResult<f64> {
        self.inner.eval_f(x, &self::config(config)?).map_err(to_py)
    }

    fn initial_point(&self) -> PyResult<f64> {
        self.inner.initial_point().map_err(to_py)
    }

    /// `(feasible, limit, margin)`.
    #[pyo3(signature = (config=None))]
    fn feasibility(&self, config: Option<PySolverConfig>) -> PyResult<(bool, f64, f64)> {
        let f = self.inner.check_feasible(&self::config(config)?).map_err(to_py)?;
        Ok((f.feasible, f.limit, f.margin))
    }

    #[pyo3(signature = (config=None))]
    fn solve(&self, config: Option<PySolverConfig>) -> PyResult<PyTrace> {
        self.inner.solve(&self::config(config)?).map(trace).map_err(to_py)
    }
}

/// `a xⁿ − b xᵏ + c` with positive coefficients.
#[pyclass(name = "Trinomial", module = "adaptroot", frozen, skip_from_py_object)]
pub struct PyTrinomial {
    inner: pl::Trinomial,
}

#[pymethods]
impl PyTrinomial {
    #[new]
    fn new(a: f64, b: f64, c: f64, n: u32, k: u32) -> PyResult<Self> {
        Ok(PyTrinomial {
            inner: pl::Trinomial::new(a, b, c, n, k).map_err(to_py)?,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        self.inner.eval_x(x)
    }

    /// `(z0, F(z0), applicable)` with `z = xᵏ`.
    fn applicability(&self) -> (f64, f64, bool) {
        let a = self.inner.applicability();
        (a.z0, a.f_min, a.applicable)
    }

    /// `(r1, r2, lower_trace, upper_trace)`; traces are in `x`.
    #[pyo3(signature = (config=None))]
    fn solve_radii(&self, config: Option<PySolverConfig>) -> PyResult<(f64, f64, PyTrace, PyTrace)> {
        let p = self.inner.solve_radii(&self::config(config)?).map_err(to_py)?;
        let t = self.inner;
        let to_x = |tr: IterationTrace| trace(tr.map_x(|z| t.to_x(z)));
        Ok((p.r1, p.r2, to_x(p.trace_lower), to_x(p.trace_upper)))
    }
}

/// Pellet radii `(inner, outer)` for coefficient moduli (constant term first)
/// and gap index `ell`, or None when they do not exist.
#[pyfunction]
fn pellet_radii(moduli: Vec<f64>, ell: usize) -> PyResult<Option<(f64, f64)>> {
    Ok(pl::pellet_radii_general(&moduli, ell).map_err(to_py)?.map(|r| (r.inner, r.outer)))
}

#[pymodule]
fn adaptroot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySolverConfig>()?;
    m.add_class::<PyTrace>()?;
    m.add_class::<PySecular>()?;
    m.add_class::<PyKnapsack>()?;
    m.add_class::<PyTrinomial>()?;
    m.add_function(wrap_pyfunction!(h, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(pellet_radii, m)?)?;
    m.add("ConvergenceError", m.py().get_type::<ConvergenceError>())?;
    Ok(())
}
