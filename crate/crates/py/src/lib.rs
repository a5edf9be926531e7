use isoglide::atlas::{compare_designs, AtlasOptions, CompareProtocol};
use isoglide::conditioning::condition_number_svd;
use isoglide::config::{self, LoadedConfig};
use isoglide::format::to_json;
use isoglide::kinematics::{forward_kinematics, ik_all_solutions, inverse_kinematics};
use isoglide::{
    AmplificationBounds, BranchSelector, DesignParams, Error, ManipConfig, ManipReport, Mat2, Point2, Sign,
    DEFAULT_SINGULARITY_TOL,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sign(v: i32) -> PyResult<Sign> {
    Sign::from_i32(v).ok_or_else(|| PyValueError::new_err(format!("sign must be +1 or -1, got {v}")))
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Mechanism geometry plus amplification bounds.
#[pyclass(name = "Design", module = "isoglide_py", frozen)]
struct PyDesign {
    inner: LoadedConfig,
}

#[pymethods]
impl PyDesign {
    #[new]
    #[pyo3(signature = (a, b, alpha1, alpha2, l1, l2, rho_min=None, rho_max=None, lambda_lo=1.0/3.0, lambda_hi=3.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        a: (f64, f64),
        b: (f64, f64),
        alpha1: f64,
        alpha2: f64,
        l1: f64,
        l2: f64,
        rho_min: Option<f64>,
        rho_max: Option<f64>,
        lambda_lo: f64,
        lambda_hi: f64,
    ) -> PyResult<Self> {
        let design = DesignParams::with_strokes(
            a.into(),
            b.into(),
            alpha1,
            alpha2,
            l1,
            l2,
            rho_min.unwrap_or(0.0),
            rho_max.unwrap_or(4.0 * l1.max(l2)),
        )
        .map_err(err)?;
        if !(0.0 <= lambda_lo && lambda_lo < lambda_hi) {
            return Err(PyValueError::new_err("amplification bounds must satisfy 0 <= lambda_lo < lambda_hi"));
        }
        Ok(PyDesign { inner: LoadedConfig { design, bounds: AmplificationBounds { lo: lambda_lo, hi: lambda_hi } } })
    }

    /// Loads `preset:<name>` or a JSON config file.
    #[staticmethod]
    fn load(source: &str) -> PyResult<Self> {
        Ok(PyDesign { inner: config::load(source).map_err(err)? })
    }

    #[staticmethod]
    fn isotropic() -> PyResult<Self> {
        Self::load("preset:isotropic")
    }

    #[staticmethod]
    fn biglide() -> PyResult<Self> {
        Self::load("preset:biglide")
    }

    #[getter]
    fn a(&self) -> (f64, f64) {
        (self.inner.design.a.x, self.inner.design.a.y)
    }

    #[getter]
    fn b(&self) -> (f64, f64) {
        (self.inner.design.b.x, self.inner.design.b.y)
    }

    #[getter]
    fn alphas(&self) -> (f64, f64) {
        (self.inner.design.alpha1, self.inner.design.alpha2)
    }

    #[getter]
    fn bars(&self) -> (f64, f64) {
        (self.inner.design.l1, self.inner.design.l2)
    }

    #[getter]
    fn strokes(&self) -> (f64, f64) {
        (self.inner.design.rho_min, self.inner.design.rho_max)
    }

    #[getter]
    fn amplification_bounds(&self) -> (f64, f64) {
        (self.inner.bounds.lo, self.inner.bounds.hi)
    }

    /// Forward kinematics for strokes `(rho1, rho2)`.
    #[pyo3(signature = (rho1, rho2, assembly=1))]
    fn fk(&self, rho1: f64, rho2: f64, assembly: i32) -> PyResult<PyPosture> {
        let branch = BranchSelector::with_assembly(sign(assembly)?);
        let q = forward_kinematics(&self.inner.design, (rho1, rho2), branch).map_err(err)?;
        Ok(self.posture(q))
    }

    /// Inverse kinematics for the end point `(x, y)`.
    #[pyo3(signature = (x, y, working_mode_1=1, working_mode_2=1))]
    fn ik(&self, x: f64, y: f64, working_mode_1: i32, working_mode_2: i32) -> PyResult<PyPosture> {
        let branch = BranchSelector::new(sign(working_mode_1)?, sign(working_mode_2)?, Sign::Plus);
        let q = inverse_kinematics(&self.inner.design, Point2::new(x, y), branch).map_err(err)?;
        Ok(self.posture(q))
    }

    /// Every inverse kinematic solution within the stroke limits.
    fn ik_all(&self, x: f64, y: f64) -> Vec<PyPosture> {
        ik_all_solutions(&self.inner.design, Point2::new(x, y)).into_iter().map(|q| self.posture(q)).collect()
    }

    fn __repr__(&self) -> String {
        let d = &self.inner.design;
        format!(
            "Design(a=({}, {}), b=({}, {}), alpha1={}, alpha2={}, l1={}, l2={}, strokes=({}, {}))",
            d.a.x, d.a.y, d.b.x, d.b.y, d.alpha1, d.alpha2, d.l1, d.l2, d.rho_min, d.rho_max
        )
    }
}

impl PyDesign {
    fn posture(&self, q: ManipConfig) -> PyPosture {
        PyPosture { design: self.inner.design, inner: q }
    }
}

/// One resolved posture of a design.
#[pyclass(name = "Posture", module = "isoglide_py", frozen)]
struct PyPosture {
    design: DesignParams,
    inner: ManipConfig,
}

#[pymethods]
impl PyPosture {
    #[getter]
    fn rho(&self) -> (f64, f64) {
        self.inner.rho
    }

    #[getter]
    fn p(&self) -> (f64, f64) {
        (self.inner.p.x, self.inner.p.y)
    }

    #[getter]
    fn c(&self) -> (f64, f64) {
        (self.inner.c.x, self.inner.c.y)
    }

    #[getter]
    fn d(&self) -> (f64, f64) {
        (self.inner.d.x, self.inner.d.y)
    }

    #[getter]
    fn theta(&self) -> (f64, f64) {
        (self.inner.theta1, self.inner.theta2)
    }

    /// `(working_mode_1, working_mode_2, assembly_mode)` as ±1.
    #[getter]
    fn branch(&self) -> (i32, i32, i32) {
        let b = self.inner.branch(&self.design);
        (b.working_mode_1.as_i32(), b.working_mode_2.as_i32(), b.assembly_mode.as_i32())
    }

    /// Jacobians, condition numbers, amplification factors and singularity
    /// class, as a dict.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let (report, bundle) = ManipReport::compute(&self.inner, &self.design, DEFAULT_SINGULARITY_TOL);
        let value = serde_json::json!({
            "class": report.class.as_str(),
            "detA": bundle.det_a,
            "detB": bundle.det_b,
            "A": bundle.a.0,
            "B": bundle.b.0,
            "J": bundle.j.map(|m| m.0),
            "Jinv": bundle.j_inv.map(|m| m.0),
            "kappaA": report.kappa_a,
            "kappaB": report.kappa_b,
            "kappaJinv": report.kappa_jinv,
            "lambda": report.amplification.map(|f| [f.lambda1, f.lambda2]),
            "isotropy_residuals": report.isotropy_residuals.map(|(a, b)| [a, b]),
            "isotropic": report.isotropic,
        });
        json_to_py(py, &to_json(&value))
    }

    fn __repr__(&self) -> String {
        format!("Posture(rho=({}, {}), p=({}, {}))", self.inner.rho.0, self.inner.rho.1, self.inner.p.x, self.inner.p.y)
    }
}

/// `σ_max/σ_min` of a 2×2 matrix given as nested rows; `inf` on rank loss.
#[pyfunction]
fn condition_number(m: [[f64; 2]; 2]) -> PyResult<f64> {
    condition_number_svd(&Mat2(m)).map_err(err)
}

/// Inscribed useful-workspace squares of two designs and their area ratio.
#[pyfunction]
#[pyo3(signature = (first, second, resolution=201))]
fn compare<'py>(
    py: Python<'py>,
    first: &PyDesign,
    second: &PyDesign,
    resolution: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let protocol = CompareProtocol {
        resolution,
        options: AtlasOptions { amplification: first.inner.bounds, ..AtlasOptions::default() },
        ..CompareProtocol::default()
    };
    let (a, b) = (first.inner.design, second.inner.design);
    let report = py.detach(|| compare_designs(&a, &b, &protocol)).map_err(err)?;
    let value = serde_json::json!({
        "area_ratio": report.area_ratio,
        "first": {
            "joint_side": report.first.joint_zone.side,
            "region_area": report.first.region_area,
            "square_area": report.first.workspace_square.area,
        },
        "second": {
            "joint_side": report.second.joint_zone.side,
            "region_area": report.second.region_area,
            "square_area": report.second.workspace_square.area,
        },
    });
    json_to_py(py, &to_json(&value))
}

#[pymodule]
fn isoglide_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDesign>()?;
    m.add_class::<PyPosture>()?;
    m.add_function(wrap_pyfunction!(condition_number, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
