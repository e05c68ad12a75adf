//! Python module `np_region` wrapping the core library.
//!
//! Errors surface as `ValueError("<ErrorName>: <message>")`. Generators, bound
//! kinds and analytic families are passed as the same spec strings the CLI
//! accepts, for example `"kl"`, `"alpha:0.3"` or `"gaussian:0,1"`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use np_region as core;

fn to_py(e: core::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.name()))
}

fn parse<T: std::str::FromStr<Err = core::Error>>(spec: &str) -> PyResult<T> {
    spec.parse().map_err(to_py)
}

/// Evaluates a Python callable as `f64 -> f64`, mapping failures to NaN.
fn py_curve<'py>(f: &'py Bound<'py, PyAny>) -> impl Fn(f64) -> f64 + 'py {
    move |x| {
        f.call1((x,))
            .and_then(|v| v.extract::<f64>())
            .unwrap_or(f64::NAN)
    }
}

#[pyclass(name = "CategoricalPair", module = "np_region", frozen)]
struct PyPair {
    inner: core::CategoricalPair,
}

#[pymethods]
impl PyPair {
    #[new]
    #[pyo3(signature = (p, q, labels = None))]
    fn new(p: Vec<f64>, q: Vec<f64>, labels: Option<Vec<String>>) -> PyResult<Self> {
        Ok(Self {
            inner: core::CategoricalPair::new(p, q, labels).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: core::CategoricalPair::from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn p(&self) -> Vec<f64> {
        self.inner.p().to_vec()
    }

    #[getter]
    fn q(&self) -> Vec<f64> {
        self.inner.q().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    /// The pair with `P` and `Q` exchanged.
    fn swapped(&self) -> Self {
        Self {
            inner: self.inner.swapped(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "CategoricalPair(p={:?}, q={:?})",
            self.inner.p(),
            self.inner.q()
        )
    }
}

#[pyclass(name = "Boundary", module = "np_region", frozen)]
struct PyBoundary {
    inner: core::PiecewiseLinearBoundary,
}

#[pymethods]
impl PyBoundary {
    #[new]
    fn new(vertices: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self {
            inner: core::PiecewiseLinearBoundary::new(vertices).map_err(to_py)?,
        })
    }

    /// The line of ignorance `(0, 1) -- (1, 0)`.
    #[staticmethod]
    fn ignorance() -> Self {
        Self {
            inner: core::PiecewiseLinearBoundary::ignorance(),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: core::PiecewiseLinearBoundary::from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn vertices(&self) -> Vec<(f64, f64)> {
        self.inner.vertices().to_vec()
    }

    fn eval(&self, alpha: f64) -> PyResult<f64> {
        self.inner.eval(alpha).map_err(to_py)
    }

    fn contains(&self, alpha: f64, beta: f64) -> bool {
        self.inner.contains(alpha, beta)
    }

    fn __call__(&self, alpha: f64) -> PyResult<f64> {
        self.eval(alpha)
    }

    fn __repr__(&self) -> String {
        format!("Boundary({:?})", self.inner.vertices())
    }
}

#[pyfunction]
fn exact_boundary(pair: &PyPair) -> PyBoundary {
    PyBoundary {
        inner: core::exact_boundary(&pair.inner),
    }
}

#[pyfunction]
fn brute_force_boundary(pair: &PyPair) -> PyResult<PyBoundary> {
    Ok(PyBoundary {
        inner: core::brute_force_boundary(&pair.inner).map_err(to_py)?,
    })
}

/// `D_f(P||Q)` for a generator spec such as `"kl"` or `"hs:2"`.
#[pyfunction]
fn f_divergence(pair: &PyPair, generator: &str) -> PyResult<f64> {
    let g: core::FGenerator = parse(generator)?;
    Ok(core::f_divergence(&pair.inner, &g).value)
}

#[pyfunction]
fn chernoff_coefficient(pair: &PyPair, q: f64) -> PyResult<f64> {
    core::chernoff_coefficient(&pair.inner, q).map_err(to_py)
}

#[pyfunction]
fn alpha_divergence(pair: &PyPair, q: f64) -> PyResult<f64> {
    Ok(core::alpha_divergence(&pair.inner, q).map_err(to_py)?.value)
}

#[pyfunction]
fn tensor_power(pair: &PyPair, n: usize) -> PyResult<PyPair> {
    Ok(PyPair {
        inner: core::tensor_power(&pair.inner, n).map_err(to_py)?,
    })
}

/// Discretizes two family specs on `cells` equal cells of `[lower, upper]`.
#[pyfunction]
fn discretize_analytic(
    p_family: &str,
    q_family: &str,
    lower: f64,
    upper: f64,
    cells: usize,
) -> PyResult<PyPair> {
    let (pf, qf): (core::AnalyticFamily, core::AnalyticFamily) =
        (parse(p_family)?, parse(q_family)?);
    let grid = core::GridSpec::new(lower, upper, cells).map_err(to_py)?;
    Ok(PyPair {
        inner: core::discretize_analytic(&pf, &qf, &grid)
            .map_err(to_py)?
            .pair,
    })
}

#[pyfunction]
#[pyo3(signature = (kind, value, alpha, n = 1))]
fn named_lower(kind: &str, value: f64, alpha: f64, n: u32) -> PyResult<f64> {
    core::named_lower(parse(kind)?, value, n, alpha).map_err(to_py)
}

#[pyfunction]
fn generic_lower(generator: &str, divergence: f64, alpha: f64) -> PyResult<f64> {
    core::generic_lower(&parse(generator)?, divergence, alpha).map_err(to_py)
}

#[pyfunction]
fn reversed_lower(generator: &str, divergence: f64, alpha: f64) -> PyResult<f64> {
    core::reversed_lower(&parse(generator)?, divergence, alpha).map_err(to_py)
}

#[pyfunction]
fn hockey_envelope(pair: &PyPair, alpha: f64) -> PyResult<f64> {
    core::hockey_envelope(&pair.inner, alpha).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (q, rho, alpha, n = 1))]
fn chernoff_envelope(q: f64, rho: f64, alpha: f64, n: u32) -> PyResult<f64> {
    core::chernoff_envelope(q, rho, n, alpha).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (q, rho, alpha, n = 1))]
fn refined_chernoff(q: f64, rho: f64, alpha: f64, n: u32) -> PyResult<f64> {
    core::refined_chernoff(q, rho, n, alpha).map_err(to_py)
}

#[pyfunction]
fn min_sample_size(q: f64, rho: f64, alpha: f64, beta: f64) -> PyResult<u64> {
    core::min_sample_size(q, rho, alpha, beta).map_err(to_py)
}

#[pyfunction]
fn achievability_sample_size(q: f64, rho: f64, alpha: f64, beta: f64) -> PyResult<u64> {
    core::achievability_sample_size(q, rho, alpha, beta).map_err(to_py)
}

#[pyfunction]
fn realize_categorical(vertices: Vec<(f64, f64)>) -> PyResult<PyPair> {
    Ok(PyPair {
        inner: core::realize_categorical(&vertices).map_err(to_py)?,
    })
}

/// Cdf table `(knots, values)` of `Q` on `[0, 1]` against a uniform `P`.
#[pyfunction]
fn realize_unit_interval(
    boundary: &Bound<'_, PyAny>,
    knots: usize,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let table = core::realize_unit_interval(py_curve(boundary), knots).map_err(to_py)?;
    Ok((table.knots().to_vec(), table.values().to_vec()))
}

#[pyfunction]
fn verify_realization(pair: &PyPair, target: &Bound<'_, PyAny>, samples: usize) -> f64 {
    core::verify_realization(&pair.inner, py_curve(target), samples)
}

/// `(ber, (alpha, beta))` for prior `pi_p` on `P`.
#[pyfunction]
fn bayes_error(boundary: &PyBoundary, pi_p: f64) -> PyResult<(f64, (f64, f64))> {
    let prior = core::PriorPair::new(pi_p).map_err(to_py)?;
    Ok(core::bayes_error(&boundary.inner, prior))
}

/// `(b_star, pi_p, ber)` at slope `z < 0`.
#[pyfunction]
fn conjugate(boundary: &PyBoundary, z: f64) -> PyResult<(f64, f64, f64)> {
    let c = core::conjugate(&boundary.inner, z).map_err(to_py)?;
    Ok((c.b_star, c.pi_p, c.ber))
}

#[pyfunction]
fn roc_points(boundary: &PyBoundary) -> Vec<(f64, f64)> {
    core::roc_points(&boundary.inner)
}

/// Weight on the boundary test that reaches `(t, g)` when mixed with a coin flip.
#[pyfunction]
fn roc_mixing_weight(boundary: &PyBoundary, t: f64, g: f64) -> PyResult<f64> {
    Ok(core::roc_mixing_weight(&boundary.inner, t, g)
        .map_err(to_py)?
        .lambda)
}

#[pymodule]
#[pyo3(name = "np_region")]
fn np_region_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPair>()?;
    m.add_class::<PyBoundary>()?;
    m.add_function(wrap_pyfunction!(exact_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(f_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_power, m)?)?;
    m.add_function(wrap_pyfunction!(discretize_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(named_lower, m)?)?;
    m.add_function(wrap_pyfunction!(generic_lower, m)?)?;
    m.add_function(wrap_pyfunction!(reversed_lower, m)?)?;
    m.add_function(wrap_pyfunction!(hockey_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(refined_chernoff, m)?)?;
    m.add_function(wrap_pyfunction!(min_sample_size, m)?)?;
    m.add_function(wrap_pyfunction!(achievability_sample_size, m)?)?;
    m.add_function(wrap_pyfunction!(realize_categorical, m)?)?;
    m.add_function(wrap_pyfunction!(realize_unit_interval, m)?)?;
    m.add_function(wrap_pyfunction!(verify_realization, m)?)?;
    m.add_function(wrap_pyfunction!(bayes_error, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(roc_points, m)?)?;
    m.add_function(wrap_pyfunction!(roc_mixing_weight, m)?)?;
    Ok(())
}
