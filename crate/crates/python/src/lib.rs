//! Python bindings for the `loopbound` toolkit.
//!
//! Points, regions and spaces are wrapped as small classes; compound results
//! (verdicts, estimates, reports) come back as plain dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use loopbound::bounds as b;
use loopbound::harness as h;
use loopbound::loops as l;
use loopbound::measure as m;
use loopbound::modelspaces as ms;
use loopbound::spaceform::{self as sf, Curvature, SideTriple, TanK};
use loopbound::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) | Error::Io(_) | Error::Serialization(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn curv(kappa: f64) -> PyResult<Curvature> {
    Curvature::new(kappa).map_err(err)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Point", module = "loopbound", from_py_object)]
#[derive(Clone)]
struct PyPoint(ms::Point);

#[pymethods]
impl PyPoint {
    /// Point of a sphere; the vector is normalized.
    #[staticmethod]
    fn unit(v: Vec<f64>) -> Self {
        PyPoint(ms::Point::unit(v))
    }

    /// Point of a cone: distance to the vertex and angular coordinate.
    #[staticmethod]
    fn polar(t: f64, phi: f64) -> Self {
        PyPoint(ms::Point::polar(t, phi))
    }

    #[staticmethod]
    fn pair(left: PyPoint, right: PyPoint) -> Self {
        PyPoint(ms::Point::pair(left.0, right.0))
    }

    /// Point of a Euclidean ball or box.
    #[staticmethod]
    fn coords(v: Vec<f64>) -> Self {
        PyPoint(ms::Point::Coords(v))
    }

    fn __repr__(&self) -> String {
        format!("Point({})", serde_json::to_string(&self.0).unwrap_or_default())
    }

    fn __eq__(&self, other: &PyPoint) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "Region", module = "loopbound", from_py_object)]
#[derive(Clone)]
struct PyRegion(m::RegionSpec);

#[pymethods]
impl PyRegion {
    #[staticmethod]
    fn ball(center: PyPoint, radius: f64) -> Self {
        PyRegion(m::RegionSpec::Ball { center: center.0, radius })
    }

    #[staticmethod]
    fn vertex_ball(radius: f64) -> Self {
        PyRegion(m::RegionSpec::vertex_ball(radius))
    }

    #[staticmethod]
    fn cone_annulus(link_measure: f64, r1: f64, r2: f64) -> Self {
        PyRegion(m::RegionSpec::ConeAnnulus { link_measure, r1, r2 })
    }

    #[staticmethod]
    fn whole_space() -> Self {
        PyRegion(m::RegionSpec::WholeSpace)
    }

    fn analytic_volume(&self, space: &PySpace) -> PyResult<f64> {
        self.0.analytic_volume(&space.0).map_err(err)
    }

    fn contains(&self, space: &PySpace, p: &PyPoint) -> PyResult<bool> {
        self.0.contains(&space.0, &p.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Region({})", serde_json::to_string(&self.0).unwrap_or_default())
    }
}

#[pyclass(name = "ModelSpace", module = "loopbound", from_py_object)]
#[derive(Clone)]
struct PySpace(ms::ModelSpace);

#[pymethods]
impl PySpace {
    #[staticmethod]
    fn sphere(kappa: f64, dim: usize) -> PyResult<Self> {
        ms::ModelSpace::sphere(kappa, dim).map(PySpace).map_err(err)
    }

    #[staticmethod]
    fn flat_cone(theta: f64, radius: f64) -> PyResult<Self> {
        ms::ModelSpace::flat_cone(theta, radius).map(PySpace).map_err(err)
    }

    #[staticmethod]
    fn kappa_cone(kappa: f64, link: f64, radius: f64) -> PyResult<Self> {
        ms::ModelSpace::kappa_cone(kappa, link, radius).map(PySpace).map_err(err)
    }

    #[staticmethod]
    fn product(left: PySpace, right: PySpace) -> PyResult<Self> {
        ms::ModelSpace::product(left.0, right.0).map(PySpace).map_err(err)
    }

    #[staticmethod]
    fn euclidean_ball(dim: usize, radius: f64) -> PyResult<Self> {
        ms::ModelSpace::euclidean_ball(dim, radius).map(PySpace).map_err(err)
    }

    #[staticmethod]
    fn euclidean_box(sides: Vec<f64>) -> PyResult<Self> {
        ms::ModelSpace::euclidean_box(sides).map(PySpace).map_err(err)
    }

    /// Builds a space from its JSON description, e.g. `{"variant": "sphere", "kappa": 1, "dim": 2}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let cfg: ms::SpaceConfig = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        ms::ModelSpace::from_config(&cfg).map(PySpace).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_config()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn curvature_bound(&self) -> f64 {
        self.0.curvature_bound().value()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.0.diameter()
    }

    fn distance(&self, p: &PyPoint, q: &PyPoint) -> PyResult<f64> {
        self.0.distance(&p.0, &q.0).map_err(err)
    }

    fn vertex_angle(&self, apex: &PyPoint, p: &PyPoint, q: &PyPoint) -> PyResult<f64> {
        self.0.vertex_angle(&apex.0, &p.0, &q.0).map_err(err)
    }

    fn geodesic_point(&self, p: &PyPoint, q: &PyPoint, s: f64) -> PyResult<PyPoint> {
        self.0.geodesic_point(&p.0, &q.0, s).map(PyPoint).map_err(err)
    }

    fn sample(&self, region: &PyRegion, count: usize, seed: u64) -> PyResult<Vec<PyPoint>> {
        let pts = ms::sample_uniform(&self.0, &region.0, count, seed).map_err(err)?;
        Ok(pts.into_iter().map(PyPoint).collect())
    }

    fn __repr__(&self) -> String {
        format!("ModelSpace({})", serde_json::to_string(&self.0.to_config()).unwrap_or_default())
    }
}

fn broken_loop(space: &PySpace, vertices: Vec<PyPoint>) -> PyResult<l::BrokenLoop> {
    l::BrokenLoop::new(space.0.clone(), vertices.into_iter().map(|p| p.0).collect()).map_err(err)
}

#[pyfunction]
fn sn(kappa: f64, r: f64) -> PyResult<f64> {
    sf::sn(curv(kappa)?, r).map_err(err)
}

#[pyfunction]
fn cs(kappa: f64, r: f64) -> PyResult<f64> {
    sf::cs(curv(kappa)?, r).map_err(err)
}

/// `tan_κ(r)`; `inf` at `r = π/(2√κ)`.
#[pyfunction]
fn tan_k(kappa: f64, r: f64) -> PyResult<f64> {
    Ok(match sf::tan_k(curv(kappa)?, r).map_err(err)? {
        TanK::Finite(t) => t,
        TanK::Infinite => f64::INFINITY,
    })
}

#[pyfunction]
fn integral_sn_pow(kappa: f64, p: u32, r: f64) -> PyResult<f64> {
    sf::integral_sn_pow(curv(kappa)?, p, r).map_err(err)
}

#[pyfunction]
fn comparison_angle(kappa: f64, a: f64, b: f64, c: f64) -> PyResult<f64> {
    sf::comparison_angle(curv(kappa)?, SideTriple::new(a, b, c)).map_err(err)
}

#[pyfunction]
fn opposite_side(kappa: f64, a: f64, b: f64, gamma: f64) -> PyResult<f64> {
    sf::opposite_side(curv(kappa)?, a, b, gamma).map_err(err)
}

#[pyfunction]
fn unit_sphere_volume(m: usize) -> f64 {
    sf::unit_sphere_volume(m)
}

#[pyfunction]
fn model_ball_volume(kappa: f64, n: usize, r: f64) -> PyResult<f64> {
    sf::model_ball_volume(curv(kappa)?, n, r).map_err(err)
}

#[pyfunction]
fn loop_length(space: &PySpace, vertices: Vec<PyPoint>) -> PyResult<f64> {
    Ok(l::loop_length(&broken_loop(space, vertices)?))
}

#[pyfunction]
fn turning_angle(space: &PySpace, vertices: Vec<PyPoint>) -> PyResult<f64> {
    l::turning_angle_broken(&broken_loop(space, vertices)?).map_err(err)
}

#[pyfunction]
fn exterior_angles(space: &PySpace, vertices: Vec<PyPoint>) -> PyResult<Vec<f64>> {
    l::exterior_angles(&broken_loop(space, vertices)?).map_err(err)
}

#[pyfunction]
fn cone_annulus_volume(kappa: f64, n: usize, link_measure: f64, r1: f64, r2: f64) -> PyResult<f64> {
    m::cone_annulus_volume(curv(kappa)?, n, link_measure, r1, r2).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (space, region, enclosing, samples, seed))]
fn mc_hausdorff<'py>(py: Python<'py>, space: &PySpace, region: &PyRegion, enclosing: &PyRegion, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let est = py.detach(|| m::mc_hausdorff(&space.0, &region.0, &enclosing.0, samples, seed)).map_err(err)?;
    to_py(py, &est)
}

#[pyfunction]
#[pyo3(signature = (space, region, epsilon, restarts = 32, seed = 0))]
fn packing_number<'py>(py: Python<'py>, space: &PySpace, region: &PyRegion, epsilon: f64, restarts: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| m::packing_number(&space.0, &region.0, epsilon, restarts, seed)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (space, region, n, schedule, restarts = 32, seed = 0))]
fn rough_volume_estimate<'py>(
    py: Python<'py>,
    space: &PySpace,
    region: &PyRegion,
    n: usize,
    schedule: Vec<f64>,
    restarts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = m::PackingOptions { restarts, ..m::PackingOptions::default() };
    let r = py.detach(|| m::rough_volume_estimate(&space.0, &region.0, n, &schedule, &opts, seed)).map_err(err)?;
    to_py(py, &r)
}

/// Returns the length-form and volume-form verdicts as two dicts.
#[pyfunction]
fn theorem_a_check<'py>(py: Python<'py>, n: usize, kappa: f64, r: f64, haus_ball: f64, length: f64, turning: f64) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let (a, v) = b::theorem_a_check(n, curv(kappa)?, r, haus_ball, length, turning).map_err(err)?;
    Ok((to_py(py, &a)?, to_py(py, &v)?))
}

#[pyfunction]
fn injectivity_bound(n: usize, kappa: f64, r: f64, haus_ball: f64, theta_p: f64) -> PyResult<f64> {
    b::injectivity_bound(n, curv(kappa)?, r, haus_ball, theta_p).map_err(err)
}

#[pyfunction]
fn theorem_b_bound(n: usize, kappa: f64, diameter: f64, volume: f64, turning_pair: f64) -> PyResult<f64> {
    let budget = b::GeometryBudget::new(n, curv(kappa)?, diameter, volume, diameter).map_err(err)?;
    b::theorem_b_bound(&budget, turning_pair).map_err(err)
}

#[pyfunction]
fn corollary_0_2_bound(eps: f64, n: usize, kappa: f64, diameter: f64, volume: f64) -> PyResult<f64> {
    let budget = b::GeometryBudget::new(n, curv(kappa)?, diameter, volume, diameter).map_err(err)?;
    b::corollary_0_2_bound(eps, &budget).map_err(err)
}

#[pyfunction]
fn bishop_gromov_lower(haus_total: f64, diam: f64, kappa: f64, n: usize, r: f64) -> PyResult<f64> {
    b::bishop_gromov_lower(haus_total, diam, curv(kappa)?, n, r).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (kappa, d, cells = 200, refine_starts = 10, tol = 1e-6))]
fn psi_estimate<'py>(py: Python<'py>, kappa: f64, d: f64, cells: usize, refine_starts: usize, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    let k = curv(kappa)?;
    let grid = b::PsiGrid { cells, refine_starts, tol };
    let e = py.detach(|| b::psi_estimate(k, d, &grid)).map_err(err)?;
    to_py(py, &e)
}

#[pyfunction]
fn lemma_1_3_check<'py>(py: Python<'py>, kappa: f64, eta: f64, eps: f64, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let k = curv(kappa)?;
    let r = py.detach(|| b::lemma_1_3_check(k, eta, eps, trials, seed)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn derive_eta(kappa: f64, eps: f64) -> PyResult<f64> {
    b::derive_eta(curv(kappa)?, eps).map_err(err)
}

#[pyfunction]
fn f_nonneg_check<'py>(py: Python<'py>, grid_points: usize) -> PyResult<Bound<'py, PyAny>> {
    let c = py.detach(|| b::f_nonneg_check(grid_points)).map_err(err)?;
    to_py(py, &c)
}

#[pyfunction]
fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    h::list_scenarios()
}

/// Runs a scenario by name (default config) and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (name, seed = None))]
fn run_scenario<'py>(py: Python<'py>, name: &str, seed: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = h::default_config(name).ok_or_else(|| PyValueError::new_err(format!("unknown scenario `{name}`")))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = py.detach(|| h::run_scenario(&cfg)).map_err(err)?;
    to_py(py, &report)
}

/// Runs a scenario from a JSON config and returns the JSON report text.
#[pyfunction]
fn run_scenario_json(py: Python<'_>, config: &str) -> PyResult<String> {
    let cfg = h::ScenarioConfig::from_json(config).map_err(err)?;
    let report = py.detach(|| h::run_scenario(&cfg)).map_err(err)?;
    let bytes = h::emit_report(&report, h::ReportFormat::Json).map_err(err)?;
    String::from_utf8(bytes).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyfunction]
fn default_config<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
    let cfg = h::default_config(name).ok_or_else(|| PyValueError::new_err(format!("unknown scenario `{name}`")))?;
    to_py(py, &cfg)
}

#[pymodule]
#[pyo3(name = "loopbound")]
pub fn loopbound_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoint>()?;
    m.add_class::<PyRegion>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(sn, m)?)?;
    m.add_function(wrap_pyfunction!(cs, m)?)?;
    m.add_function(wrap_pyfunction!(tan_k, m)?)?;
    m.add_function(wrap_pyfunction!(integral_sn_pow, m)?)?;
    m.add_function(wrap_pyfunction!(comparison_angle, m)?)?;
    m.add_function(wrap_pyfunction!(opposite_side, m)?)?;
    m.add_function(wrap_pyfunction!(unit_sphere_volume, m)?)?;
    m.add_function(wrap_pyfunction!(model_ball_volume, m)?)?;
    m.add_function(wrap_pyfunction!(loop_length, m)?)?;
    m.add_function(wrap_pyfunction!(turning_angle, m)?)?;
    m.add_function(wrap_pyfunction!(exterior_angles, m)?)?;
    m.add_function(wrap_pyfunction!(cone_annulus_volume, m)?)?;
    m.add_function(wrap_pyfunction!(mc_hausdorff, m)?)?;
    m.add_function(wrap_pyfunction!(packing_number, m)?)?;
    m.add_function(wrap_pyfunction!(rough_volume_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_a_check, m)?)?;
    m.add_function(wrap_pyfunction!(injectivity_bound, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_b_bound, m)?)?;
    m.add_function(wrap_pyfunction!(corollary_0_2_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bishop_gromov_lower, m)?)?;
    m.add_function(wrap_pyfunction!(psi_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_1_3_check, m)?)?;
    m.add_function(wrap_pyfunction!(derive_eta, m)?)?;
    m.add_function(wrap_pyfunction!(f_nonneg_check, m)?)?;
    m.add_function(wrap_pyfunction!(list_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario_json, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
