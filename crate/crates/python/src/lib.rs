//! Python bindings for `kopt-core`.

use kopt_core::analytic;
use kopt_core::io;
use kopt_core::metrics;
use kopt_core::optimizer::{self, OptimizeSpec};
use kopt_core::simplex::{self, ComponentBounds, MixturePoint};
use kopt_core::{Criterion, ModelBasis, Order, TransformDirection};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: kopt_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn basis(q: usize, order: u8) -> PyResult<ModelBasis> {
    ModelBasis::new(q, Order::try_from(order).map_err(err)?).map_err(err)
}

fn points_from(coords: Vec<Vec<f64>>) -> PyResult<Vec<MixturePoint>> {
    coords
        .into_iter()
        .map(|c| MixturePoint::new(c).map_err(err))
        .collect()
}

/// A weighted set of mixture points.
#[pyclass(name = "Design", module = "kopt", frozen)]
struct PyDesign {
    inner: kopt_core::Design,
}

#[pymethods]
impl PyDesign {
    /// Uniform weights when `weights` is omitted.
    #[new]
    #[pyo3(signature = (points, weights=None))]
    fn new(points: Vec<Vec<f64>>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let pts = points_from(points)?;
        let inner = match weights {
            Some(w) => kopt_core::Design::new(pts, w),
            None => kopt_core::Design::uniform(pts),
        }
        .map_err(err)?;
        Ok(PyDesign { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyDesign {
            inner: io::parse_design(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        io::design_to_json(&self.inner)
    }

    fn to_csv(&self) -> String {
        io::design_to_csv(&self.inner)
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner
            .points()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    /// Exact weights as `(numerator, denominator)` pairs, or `None`.
    #[getter]
    fn weights_exact(&self) -> Option<Vec<(i64, i64)>> {
        self.inner
            .exact_weights()
            .map(|w| w.iter().map(|r| (*r.numer(), *r.denom())).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Design(q={}, points={})", self.inner.q(), self.inner.len())
    }
}

#[pyfunction]
fn simplex_lattice(q: usize, m: usize) -> PyResult<PyDesign> {
    let pts = simplex::simplex_lattice(q, m).map_err(err)?;
    Ok(PyDesign {
        inner: kopt_core::Design::uniform(pts).map_err(err)?,
    })
}

#[pyfunction]
fn simplex_centroid(q: usize) -> PyResult<PyDesign> {
    let pts = simplex::simplex_centroid(q).map_err(err)?;
    Ok(PyDesign {
        inner: kopt_core::Design::uniform(pts).map_err(err)?,
    })
}

#[pyfunction]
fn k_optimal(order: u8, q: usize) -> PyResult<PyDesign> {
    let inner = match Order::try_from(order).map_err(err)? {
        Order::First => analytic::k_optimal_first_order(q),
        Order::Second => analytic::k_optimal_second_order(q),
    }
    .map_err(err)?;
    Ok(PyDesign { inner })
}

/// Metrics of the information matrix: p, lambda_max, lambda_min, kappa, log_det.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, design: &PyDesign, order: u8) -> PyResult<Bound<'py, PyDict>> {
    let b = basis(design.inner.q(), order)?;
    let r = metrics::evaluate(&design.inner, &b).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("p", r.p)?;
    d.set_item("lambda_max", r.lambda_max)?;
    d.set_item("lambda_min", r.lambda_min)?;
    d.set_item("kappa", r.kappa)?;
    d.set_item("log_det", r.log_det)?;
    Ok(d)
}

#[pyfunction]
fn information_matrix(design: &PyDesign, order: u8) -> PyResult<Vec<Vec<f64>>> {
    let b = basis(design.inner.q(), order)?;
    Ok(metrics::information_matrix(&design.inner, &b)
        .map_err(err)?
        .rows())
}

#[pyfunction]
fn symmetric_extreme_eigenvalues(q: usize, r2: f64) -> PyResult<(f64, f64)> {
    analytic::symmetric_extreme_eigenvalues(q, r2).map_err(err)
}

#[pyfunction]
fn symmetric_condition_number(q: usize, r2: f64) -> PyResult<f64> {
    Ok(analytic::symmetric_condition_number(q, r2)
        .map_err(err)?
        .value())
}

#[pyfunction]
fn symmetrize(design: &PyDesign) -> PyResult<PyDesign> {
    Ok(PyDesign {
        inner: analytic::symmetrize(&design.inner).map_err(err)?,
    })
}

/// The weight table as CSV (`fmt="csv"`) or aligned text (`fmt="text"`).
#[pyfunction]
#[pyo3(signature = (q_max, fmt="csv"))]
fn weight_table(q_max: usize, fmt: &str) -> PyResult<String> {
    let t = analytic::weight_table(q_max).map_err(err)?;
    match fmt {
        "csv" => Ok(t.to_csv()),
        "text" => Ok(t.to_text()),
        other => Err(PyValueError::new_err(format!("unknown format '{other}'"))),
    }
}

#[pyfunction]
#[pyo3(signature = (design, direction, lower=None, upper=None))]
fn transform(
    design: &PyDesign,
    direction: &str,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
) -> PyResult<PyDesign> {
    let bounds = match (lower, upper) {
        (Some(l), Some(u)) => ComponentBounds::new(l, u),
        (Some(l), None) => ComponentBounds::lower_only(l),
        (None, Some(u)) => ComponentBounds::upper_only(u),
        (None, None) => return Err(PyValueError::new_err("need lower or upper bounds")),
    }
    .map_err(err)?;
    let dir: TransformDirection = direction.parse().map_err(err)?;
    Ok(PyDesign {
        inner: simplex::transform_design(&design.inner, &bounds, dir).map_err(err)?,
    })
}

/// Optimizes weights on the support of `support`; its weights are ignored.
#[pyfunction]
#[pyo3(signature = (
    support,
    order,
    criterion="k",
    tolerance=optimizer::DEFAULT_TOLERANCE,
    multistarts=optimizer::DEFAULT_MULTISTARTS,
    seed=0,
    symmetry_reduction=true,
))]
#[allow(clippy::too_many_arguments)]
fn optimize_weights<'py>(
    py: Python<'py>,
    support: &PyDesign,
    order: u8,
    criterion: &str,
    tolerance: f64,
    multistarts: usize,
    seed: u64,
    symmetry_reduction: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let criterion: Criterion = criterion.parse().map_err(err)?;
    let mut spec = OptimizeSpec::new(
        criterion,
        support.inner.points().to_vec(),
        basis(support.inner.q(), order)?,
    );
    spec.tolerance = tolerance;
    spec.multistarts = multistarts;
    spec.seed = seed;
    spec.symmetry_reduction = symmetry_reduction;
    let r = py
        .detach(|| optimizer::optimize_weights(&spec))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("weights", r.weights)?;
    d.set_item("objective", r.objective)?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("converged", r.converged)?;
    d.set_item("starts_used", r.starts_used)?;
    Ok(d)
}

/// `(eff_d_of_k, eff_k_of_d)` against the equal-weight `{q, 2}` lattice.
#[pyfunction]
fn efficiency(q: usize) -> PyResult<(f64, f64)> {
    let r = metrics::efficiency_comparison(q).map_err(err)?;
    Ok((r.eff_d_of_k, r.eff_k_of_d))
}

#[pymodule]
fn kopt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDesign>()?;
    m.add_function(wrap_pyfunction!(simplex_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(simplex_centroid, m)?)?;
    m.add_function(wrap_pyfunction!(k_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(information_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_extreme_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_condition_number, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize, m)?)?;
    m.add_function(wrap_pyfunction!(weight_table, m)?)?;
    m.add_function(wrap_pyfunction!(transform, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_weights, m)?)?;
    m.add_function(wrap_pyfunction!(efficiency, m)?)?;
    Ok(())
}
