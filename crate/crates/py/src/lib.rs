//! Python bindings for quatcurve.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quatcurve as qc;

create_exception!(quatcurve, QuatcurveError, PyValueError);

fn to_py(e: qc::Error) -> PyErr {
    QuatcurveError::new_err(e.to_string())
}

/// Real quaternion, identified with the point `(x1, x2, x3, x4)` of R^4; `x4` is the scalar part.
#[pyclass(name = "Quaternion", frozen, eq, from_py_object)]
#[derive(Clone, Copy, PartialEq)]
pub struct PyQuaternion(qc::Quaternion);

#[pymethods]
impl PyQuaternion {
    #[new]
    fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        PyQuaternion(qc::Quaternion::from_coords([x1, x2, x3, x4]))
    }

    fn coords(&self) -> [f64; 4] {
        self.0.coords()
    }

    #[getter]
    fn scalar(&self) -> f64 {
        self.0.scalar()
    }

    #[getter]
    fn vector(&self) -> [f64; 3] {
        self.0.vector().to_array()
    }

    fn conjugate(&self) -> Self {
        PyQuaternion(qc::conjugate(self.0))
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyQuaternion(qc::qmul(self.0, other.0))
    }

    fn __add__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 + other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyQuaternion(self.0 - other.0)
    }

    fn __neg__(&self) -> Self {
        PyQuaternion(-self.0)
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.0.coords();
        format!("Quaternion({a:?}, {b:?}, {c:?}, {d:?})")
    }
}

/// A curve in R^4 with derivatives up to order 5.
#[pyclass(name = "Curve", frozen)]
pub struct PyCurve(qc::CurveDefinition);

#[pymethods]
impl PyCurve {
    /// Built-in curve: `paper_example`, `circular4` or `double_helix`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let spec = qc::CurveSpec::builtin(name).ok_or_else(|| QuatcurveError::new_err(format!("unknown curve {name:?}")))?;
        Ok(PyCurve(qc::build_curve(&spec).map_err(to_py)?))
    }

    /// Curve from its JSON description.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec = qc::CurveSpec::from_json(text).map_err(to_py)?;
        Ok(PyCurve(qc::build_curve(&spec).map_err(to_py)?))
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        let d = self.0.domain();
        (d.min, d.max)
    }

    fn position(&self, s: f64) -> PyResult<PyQuaternion> {
        self.0.position(s).map(PyQuaternion).map_err(to_py)
    }

    #[pyo3(signature = (s, order = 1))]
    fn derivative(&self, s: f64, order: usize) -> PyResult<PyQuaternion> {
        self.0.eval(s, order).map(PyQuaternion).map_err(to_py)
    }

    /// `n` uniform points over the domain, minus any excluded band.
    fn grid(&self, n: usize) -> Vec<f64> {
        self.0.domain().grid(n)
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.0.label())
    }
}

#[pyclass(name = "FrenetFrame", frozen)]
pub struct PyFrenetFrame(qc::FrenetFrame4);

#[pymethods]
impl PyFrenetFrame {
    #[getter]
    fn s(&self) -> f64 {
        self.0.s
    }
    #[getter]
    fn point(&self) -> PyQuaternion {
        PyQuaternion(self.0.point)
    }
    #[getter]
    fn t(&self) -> PyQuaternion {
        PyQuaternion(self.0.t)
    }
    #[getter]
    fn n(&self) -> PyQuaternion {
        PyQuaternion(self.0.n)
    }
    #[getter]
    fn b(&self) -> PyQuaternion {
        PyQuaternion(self.0.b)
    }
    #[getter]
    fn e(&self) -> PyQuaternion {
        PyQuaternion(self.0.e)
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa
    }
    #[getter]
    fn k(&self) -> f64 {
        self.0.k
    }
    #[getter]
    fn bitorsion(&self) -> f64 {
        self.0.bitorsion
    }
    #[getter]
    fn eta(&self) -> i32 {
        self.0.eta.value() as i32
    }

    fn det(&self) -> f64 {
        self.0.det()
    }

    fn __repr__(&self) -> String {
        format!("FrenetFrame(s={:?}, kappa={:?}, k={:?}, bitorsion={:?})", self.0.s, self.0.kappa, self.0.k, self.0.bitorsion)
    }
}

#[pyclass(name = "PredictedInvolute", frozen)]
pub struct PyPredictedInvolute(qc::PredictedInvoluteApparatus);

#[pymethods]
impl PyPredictedInvolute {
    #[getter]
    fn t(&self) -> PyQuaternion {
        PyQuaternion(self.0.t)
    }
    #[getter]
    fn n(&self) -> PyQuaternion {
        PyQuaternion(self.0.n)
    }
    #[getter]
    fn b(&self) -> PyQuaternion {
        PyQuaternion(self.0.b)
    }
    #[getter]
    fn e(&self) -> PyQuaternion {
        PyQuaternion(self.0.e)
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.0.curvatures.kappa_phi
    }
    #[getter]
    fn k_star(&self) -> f64 {
        self.0.curvatures.k_star
    }
}

#[pyclass(name = "VerifyReport", frozen)]
pub struct PyVerifyReport(qc::VerifyReport);

#[pymethods]
impl PyVerifyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed
    }

    /// `+1`, `-1`, or `None` when the evolute suite did not run or did not resolve.
    #[getter]
    fn resolved_sign(&self) -> Option<i32> {
        self.0.resolved_sign.map(|s| s.value() as i32)
    }

    /// `(id, max_residual, tolerance, passed)` for every check.
    fn checks(&self) -> Vec<(String, f64, f64, bool)> {
        self.0.checks.iter().map(|c| (c.id.clone(), c.max_residual, c.tolerance, c.passed)).collect()
    }

    fn json(&self) -> String {
        self.0.to_json()
    }

    fn text(&self) -> String {
        self.0.to_text()
    }
}

#[pyfunction]
fn hform(p: PyQuaternion, q: PyQuaternion) -> f64 {
    qc::hform(p.0, q.0)
}

#[pyfunction]
fn cross4(a: PyQuaternion, b: PyQuaternion, c: PyQuaternion) -> PyQuaternion {
    PyQuaternion(qc::cross4(a.0, b.0, c.0))
}

#[pyfunction]
fn det4(a: PyQuaternion, b: PyQuaternion, c: PyQuaternion, d: PyQuaternion) -> f64 {
    qc::det4(a.0, b.0, c.0, d.0)
}

#[pyfunction]
fn frenet(curve: &PyCurve, s: f64) -> PyResult<PyFrenetFrame> {
    qc::frenet_apparatus(&curve.0, s).map(PyFrenetFrame).map_err(to_py)
}

/// Frames over `grid` with `E` kept continuous; singular points are dropped.
#[pyfunction]
fn sample(curve: &PyCurve, grid: Vec<f64>) -> PyResult<Vec<PyFrenetFrame>> {
    let series = qc::sample_apparatus(&curve.0, &grid).map_err(to_py)?;
    Ok(series.frames.into_iter().map(PyFrenetFrame).collect())
}

/// Involute `x + (c - s) x'` of a unit-speed curve.
#[pyfunction]
#[pyo3(signature = (curve, c, exclusion_tol = None))]
fn involute(curve: &PyCurve, c: f64, exclusion_tol: Option<f64>) -> PyResult<PyCurve> {
    let params = match exclusion_tol {
        Some(tol) => qc::InvoluteParams::new(c, tol),
        None => qc::InvoluteParams::for_domain(c, curve.0.domain()),
    }
    .map_err(to_py)?;
    qc::involute_curve(&curve.0, params).map(PyCurve).map_err(to_py)
}

/// Involute apparatus at `s` predicted from the curve's own apparatus.
#[pyfunction]
fn predicted_involute(curve: &PyCurve, c: f64, s: f64) -> PyResult<PyPredictedInvolute> {
    let params = qc::InvoluteParams::for_domain(c, curve.0.domain()).map_err(to_py)?;
    qc::predicted_involute_apparatus(&curve.0, params, s).map(PyPredictedInvolute).map_err(to_py)
}

/// Spatial frame `(t, n, b)` and curvatures `(k, r)` at `s`.
#[pyfunction]
fn spatial_frame(curve: &PyCurve, s: f64) -> PyResult<([[f64; 3]; 3], f64, f64)> {
    let f = qc::frenet_apparatus(&curve.0, s).map_err(to_py)?;
    let sf = qc::spatial_frame(&f).map_err(to_py)?;
    Ok(([sf.t.vector().to_array(), sf.n.vector().to_array(), sf.b.vector().to_array()], sf.k, sf.r))
}

/// Points of the associated spatial curve over `grid`, starting at `anchor`.
#[pyfunction]
#[pyo3(signature = (curve, grid, anchor = (0.0, 0.0, 0.0)))]
fn associated_curve(curve: &PyCurve, grid: Vec<f64>, anchor: (f64, f64, f64)) -> PyResult<Vec<[f64; 3]>> {
    let start = qc::Vec3::new(anchor.0, anchor.1, anchor.2);
    let points = qc::associated_spatial_curve(&curve.0, &grid, start).map_err(to_py)?;
    Ok(points.into_iter().map(|p| p.to_array()).collect())
}

#[pyfunction]
#[pyo3(signature = (suite = "all", tol = qc::verify::DEFAULT_TOL, grid_points = qc::verify::DEFAULT_GRID))]
fn verify(suite: &str, tol: f64, grid_points: usize) -> PyResult<PyVerifyReport> {
    let suite: qc::Suite = suite.parse().map_err(to_py)?;
    let options = qc::VerifyOptions { tol, grid_points, ..qc::VerifyOptions::default() };
    qc::run_verify(suite, &options).map(PyVerifyReport).map_err(to_py)
}

/// Frenet apparatus, involutes and associated spatial curves of quaternionic curves in R^4.
#[pymodule(name = "quatcurve")]
mod quatcurve_module {
    #[pymodule_export]
    use super::{
        associated_curve, cross4, det4, frenet, hform, involute, predicted_involute, sample, spatial_frame, verify,
        PyCurve, PyFrenetFrame, PyPredictedInvolute, PyQuaternion, PyVerifyReport, QuatcurveError,
    };
}
