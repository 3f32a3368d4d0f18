//! Python module `pyodelin`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use odelin::expr::{is_zero, parse_expr, Expr, ParseContext};
use odelin::lie_tresse::{lie_tresse_residuals, Linearizability};
use odelin::ode::{parse_ode, CubicOde};
use odelin::report::{self, run_pipeline, Mode, Options};
use odelin::transform::{pushforward_coefficients, transform_matches_ode, PointTransform};

fn err(e: odelin::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn context(params: &[String]) -> ParseContext {
    ParseContext::with_params(params.iter().map(String::as_str))
}

fn expr(text: &str, params: &[String]) -> PyResult<Expr> {
    parse_expr(text, &context(params)).map_err(err)
}

/// Second-order ODE `y'' + F3 y'^3 + F2 y'^2 + F1 y' + F = 0`.
#[pyclass(name = "Ode", frozen)]
struct PyOde {
    inner: CubicOde,
}

#[pymethods]
impl PyOde {
    #[new]
    #[pyo3(signature = (equation, params = Vec::new()))]
    fn new(equation: &str, params: Vec<String>) -> PyResult<Self> {
        let inner = parse_ode(equation, &context(&params)).map_err(err)?;
        Ok(PyOde { inner })
    }

    /// `(F3, F2, F1, F)` as strings.
    fn coefficients(&self) -> (String, String, String, String) {
        let [a, b, c, d] = self.inner.coeffs();
        (a.to_string(), b.to_string(), c.to_string(), d.to_string())
    }

    /// Both Lie-Tresse invariants, normalized.
    fn lie_tresse(&self) -> PyResult<(String, String)> {
        let lt = lie_tresse_residuals(&self.inner).map_err(err)?;
        Ok((lt.first.to_string(), lt.second.to_string()))
    }

    fn is_linearizable(&self) -> PyResult<bool> {
        let lt = lie_tresse_residuals(&self.inner).map_err(err)?;
        Ok(lt.verdict() == Linearizability::Linearizable)
    }

    fn __repr__(&self) -> String {
        format!("Ode({})", self.inner)
    }
}

/// Point transformation `t = phi(x, y)`, `u = psi(x, y)`.
#[pyclass(name = "Transform", frozen)]
struct PyTransform {
    inner: PointTransform,
}

#[pymethods]
impl PyTransform {
    #[new]
    #[pyo3(signature = (phi, psi, params = Vec::new()))]
    fn new(phi: &str, psi: &str, params: Vec<String>) -> PyResult<Self> {
        let inner = PointTransform::new(expr(phi, &params)?, expr(psi, &params)?).map_err(err)?;
        Ok(PyTransform { inner })
    }

    #[getter]
    fn phi(&self) -> String {
        self.inner.phi.to_string()
    }

    #[getter]
    fn psi(&self) -> String {
        self.inner.psi.to_string()
    }

    fn jacobian(&self) -> PyResult<String> {
        Ok(self.inner.jacobian().map_err(err)?.to_string())
    }

    /// The ODE this transformation maps to `u'' = 0`.
    fn pushforward(&self) -> PyResult<PyOde> {
        let (_, inner) = pushforward_coefficients(&self.inner).map_err(err)?;
        Ok(PyOde { inner })
    }

    /// Whether this transformation maps `ode` to `u'' = 0`.
    fn linearizes(&self, ode: &PyOde) -> PyResult<bool> {
        Ok(transform_matches_ode(&self.inner, &ode.inner)
            .map_err(err)?
            .matches)
    }

    fn __repr__(&self) -> String {
        format!("Transform(phi={}, psi={})", self.inner.phi, self.inner.psi)
    }
}

/// Outcome of a pipeline run.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: report::Report,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.exit_code()
    }

    #[getter]
    fn verdict(&self) -> String {
        format!("{:?}", self.inner.status.verdict)
    }

    #[getter]
    fn stage(&self) -> String {
        self.inner.status.stage.clone()
    }

    #[getter]
    fn message(&self) -> Option<String> {
        self.inner.status.message.clone()
    }

    /// `(phi, psi)` when a transformation was found.
    #[getter]
    fn transform(&self) -> Option<(String, String)> {
        self.inner
            .transform
            .as_ref()
            .map(|t| (t.phi.clone(), t.psi.clone()))
    }

    #[getter]
    fn general_solution(&self) -> Option<String> {
        self.inner
            .general_solution
            .as_ref()
            .map(|g| g.explicit.clone().unwrap_or_else(|| g.implicit.clone()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(verdict={:?}, stage={})",
            self.inner.status.verdict, self.inner.status.stage
        )
    }
}

/// Run the pipeline. `mode` is one of `check`, `linearize`, `solve`,
/// `lie-verify`, `lambda-verify` (needs `lam`), `transform-verify`
/// (needs `phi`, `psi`).
#[pyfunction]
#[pyo3(signature = (
    equation, mode = "solve", params = Vec::new(), w = None, z = None, g = None,
    h = None, ansatz = None, lam = None, phi = None, psi = None, seed = None, steps = 1000
))]
#[allow(clippy::too_many_arguments)]
fn run(
    equation: &str,
    mode: &str,
    params: Vec<String>,
    w: Option<String>,
    z: Option<String>,
    g: Option<String>,
    h: Option<(String, String)>,
    ansatz: Option<String>,
    lam: Option<String>,
    phi: Option<String>,
    psi: Option<String>,
    seed: Option<u64>,
    steps: usize,
) -> PyResult<PyReport> {
    let missing = |what: &str| PyValueError::new_err(format!("mode `{mode}` needs {what}"));
    let mode = match mode {
        "check" => Mode::Check,
        "linearize" => Mode::Linearize,
        "solve" => Mode::Solve,
        "lie-verify" => Mode::LieVerify,
        "lambda-verify" => Mode::LambdaVerify {
            lambda: lam.ok_or_else(|| missing("lam"))?,
        },
        "transform-verify" => Mode::TransformVerify {
            phi: phi.ok_or_else(|| missing("phi"))?,
            psi: psi.ok_or_else(|| missing("psi"))?,
        },
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    let defaults = Options::default();
    let opts = Options {
        mode,
        seed: seed.unwrap_or(defaults.seed),
        params,
        w,
        z,
        g,
        h,
        ansatz,
        steps,
    };
    Ok(PyReport {
        inner: run_pipeline(equation, &opts),
    })
}

/// Zero test of an expression: `"Zero"`, `"NonZero"` or `"NumericOnlyZero"`.
#[pyfunction]
#[pyo3(signature = (expression, params = Vec::new()))]
fn zero_test(expression: &str, params: Vec<String>) -> PyResult<String> {
    let verdict = is_zero(&expr(expression, &params)?).map_err(err)?;
    Ok(format!("{verdict:?}"))
}

#[pymodule]
fn pyodelin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOde>()?;
    m.add_class::<PyTransform>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(zero_test, m)?)?;
    Ok(())
}
