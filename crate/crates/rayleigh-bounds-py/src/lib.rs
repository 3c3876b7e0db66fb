//! Python bindings: channel/PSD types, bound evaluation, prediction,
//! fading synthesis, sweeps and the verification suite.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rayleigh_bounds::prediction::{self, PowerProfile, ToeplitzCov};
use rayleigh_bounds::quadrature::{self, QuadratureConfig};
use rayleigh_bounds::rates::{self as rates_mod, BoundKind, EvalContext};
use rayleigh_bounds::sweep::{self, FigureOptions, PsdFamily, SweepSpec, Units};
use rayleigh_bounds::verify::{self, Level};
use rayleigh_bounds::{simulator, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::LengthMismatch { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "ChannelParams", frozen, from_py_object)]
#[derive(Clone)]
struct PyChannelParams(rayleigh_bounds::ChannelParams);

#[pymethods]
impl PyChannelParams {
    #[new]
    fn new(sigma_h2: f64, sigma_n2: f64, sigma_x2: f64, f_d: f64) -> PyResult<Self> {
        rayleigh_bounds::ChannelParams::new(sigma_h2, sigma_n2, sigma_x2, f_d).map(Self).map_err(err)
    }

    /// Unit fading and noise power with SNR ρ.
    #[staticmethod]
    fn normalized(rho: f64, f_d: f64) -> PyResult<Self> {
        rayleigh_bounds::ChannelParams::normalized(rho, f_d).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_snr_db(snr_db: f64, f_d: f64) -> PyResult<Self> {
        rayleigh_bounds::ChannelParams::from_snr_db(snr_db, f_d).map(Self).map_err(err)
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.0.rho()
    }

    #[getter]
    fn f_d(&self) -> f64 {
        self.0.f_d
    }

    fn __repr__(&self) -> String {
        format!("ChannelParams(rho={}, f_d={})", self.0.rho(), self.0.f_d)
    }
}

#[pyclass(name = "PsdModel", frozen, from_py_object)]
#[derive(Clone)]
struct PyPsdModel(rayleigh_bounds::PsdModel);

#[pymethods]
impl PyPsdModel {
    #[staticmethod]
    #[pyo3(signature = (f_d, sigma_h2=1.0))]
    fn rectangular(f_d: f64, sigma_h2: f64) -> PyResult<Self> {
        rayleigh_bounds::PsdModel::rectangular(f_d, sigma_h2).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (f_d, sigma_h2=1.0))]
    fn jakes(f_d: f64, sigma_h2: f64) -> PyResult<Self> {
        rayleigh_bounds::PsdModel::jakes(f_d, sigma_h2).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (f_d, rolloff, sigma_h2=1.0))]
    fn raised_cosine(f_d: f64, rolloff: f64, sigma_h2: f64) -> PyResult<Self> {
        rayleigh_bounds::PsdModel::raised_cosine(f_d, rolloff, sigma_h2).map(Self).map_err(err)
    }

    /// Piecewise-linear PSD from samples on [0, 1/2], renormalized to σ_h².
    #[staticmethod]
    #[pyo3(signature = (freqs, values, sigma_h2=1.0))]
    fn tabulated(freqs: Vec<f64>, values: Vec<f64>, sigma_h2: f64) -> PyResult<Self> {
        rayleigh_bounds::PsdModel::tabulated(&freqs, &values, sigma_h2).map(Self).map_err(err)
    }

    fn psd_eval(&self, f: f64) -> PyResult<f64> {
        self.0.psd_eval(f).map_err(err)
    }

    fn autocorr(&self, lag: i64) -> f64 {
        self.0.autocorr(lag)
    }

    #[getter]
    fn f_d(&self) -> f64 {
        self.0.f_d()
    }

    #[getter]
    fn sigma_h2(&self) -> f64 {
        self.0.sigma_h2()
    }

    fn describe(&self) -> String {
        self.0.describe()
    }

    fn __repr__(&self) -> String {
        format!("PsdModel('{}')", self.0.describe())
    }
}

/// A bound in nats per channel use.
#[pyclass(name = "BoundValue", frozen, get_all)]
struct PyBoundValue {
    kind: String,
    value: f64,
    unclamped: f64,
    clamped: bool,
    alpha: f64,
    argmax: Option<f64>,
    stderr: Option<f64>,
}

#[pymethods]
impl PyBoundValue {
    fn __repr__(&self) -> String {
        format!("BoundValue(kind='{}', value={}, clamped={})", self.kind, self.value, self.clamped)
    }
}

impl From<rates_mod::BoundValue> for PyBoundValue {
    fn from(b: rates_mod::BoundValue) -> Self {
        PyBoundValue {
            kind: b.kind.id().to_string(),
            value: b.value,
            unclamped: b.unclamped,
            clamped: b.clamped,
            alpha: b.alpha_used,
            argmax: b.argmax,
            stderr: b.stderr,
        }
    }
}

/// Identifiers accepted by `evaluate_bound` and `sweep`.
#[pyfunction]
fn bound_kinds() -> Vec<&'static str> {
    BoundKind::ALL.iter().map(|k| k.id()).collect()
}

/// E log(1 + a·Z), Z ~ Exp(1).
#[pyfunction]
fn g_logmoment(a: f64) -> PyResult<f64> {
    quadrature::g_logmoment(a).map_err(err)
}

/// ∫ log(1 + c S_h(f)/σ_h²) df.
#[pyfunction]
fn szego_log_integral(model: &PyPsdModel, c: f64) -> PyResult<f64> {
    quadrature::szego_log_integral(&model.0, c).map_err(err)
}

/// Evaluates one bound; returns None where it is not defined.
#[pyfunction]
#[pyo3(signature = (kind, params, model, beta=1.0, cm_points=100, mc_samples=20_000, seed=0x5eed, pilot_spacing=None))]
#[allow(clippy::too_many_arguments)]
fn evaluate_bound(
    py: Python<'_>,
    kind: &str,
    params: &PyChannelParams,
    model: &PyPsdModel,
    beta: f64,
    cm_points: usize,
    mc_samples: usize,
    seed: u64,
    pilot_spacing: Option<usize>,
) -> PyResult<Option<PyBoundValue>> {
    let k = BoundKind::from_id(kind).ok_or_else(|| PyValueError::new_err(format!("unknown bound '{kind}'")))?;
    let mut ctx = EvalContext::new(model.0.clone()).with_beta(beta).map_err(err)?;
    ctx.cm_points = cm_points;
    ctx.pilot_spacing = pilot_spacing;
    ctx.cfg = QuadratureConfig::default().with_samples(mc_samples).with_seed(seed);
    let p = params.0.clone();
    py.detach(|| rates_mod::evaluate_bound(k, &p, &ctx)).map(|o| o.map(PyBoundValue::from)).map_err(err)
}

/// LMMSE one-step prediction error from past powers z_1..z_{N−1}.
#[pyfunction]
#[pyo3(signature = (model, powers, sigma_n2=1.0))]
fn pred_error_finite(model: &PyPsdModel, powers: Vec<f64>, sigma_n2: f64) -> PyResult<f64> {
    let z = PowerProfile::new(powers).map_err(err)?;
    let cov = ToeplitzCov::from_model(&model.0, z.len() + 1);
    prediction::pred_error_finite(&cov, &z, sigma_n2).map_err(err)
}

/// Infinite-past prediction error for constant power.
#[pyfunction]
#[pyo3(signature = (model, power, sigma_n2=1.0))]
fn pred_error_cm_infinite(model: &PyPsdModel, power: f64, sigma_n2: f64) -> PyResult<f64> {
    prediction::pred_error_cm_infinite(&model.0, power, sigma_n2).map_err(err)
}

/// Synchronized-detection bounds for every admissible pilot spacing:
/// (rows of (L, σ²_pil, lower, upper), index of the best row).
#[pyfunction]
fn sd_optimal(params: &PyChannelParams, model: &PyPsdModel) -> PyResult<(Vec<(usize, f64, f64, f64)>, usize)> {
    let t = rates_mod::sd_optimal(&params.0, &model.0).map_err(err)?;
    Ok((t.rows.iter().map(|r| (r.pilot_spacing, r.sigma2_pil, r.lower, r.upper)).collect(), t.best))
}

/// One fading realization as a list of complex numbers.
#[pyfunction]
#[pyo3(signature = (model, n, seed=0x5eed, cholesky=false))]
fn gen_fading(py: Python<'_>, model: &PyPsdModel, n: usize, seed: u64, cholesky: bool) -> PyResult<Vec<(f64, f64)>> {
    let m = model.0.clone();
    let r = py
        .detach(|| if cholesky { simulator::gen_fading_cholesky(&m, n, seed) } else { simulator::gen_fading(&m, n, seed) })
        .map_err(err)?;
    Ok(r.h.iter().map(|c| (c.re, c.im)).collect())
}

/// Grid sweep; returns the CSV text.
#[pyfunction]
#[pyo3(signature = (psd, f_d, snr_db, bounds, beta=1.0, units="nat", seed=0x5eed, mc_samples=20_000, cm_points=100))]
#[allow(clippy::too_many_arguments)]
fn run_sweep(
    py: Python<'_>,
    psd: &str,
    f_d: Vec<f64>,
    snr_db: Vec<f64>,
    bounds: Vec<String>,
    beta: f64,
    units: &str,
    seed: u64,
    mc_samples: usize,
    cm_points: usize,
) -> PyResult<String> {
    let kinds = bounds
        .iter()
        .map(|b| BoundKind::from_id(b).ok_or_else(|| PyValueError::new_err(format!("unknown bound '{b}'"))))
        .collect::<PyResult<Vec<_>>>()?;
    let mut spec = SweepSpec::new(psd.parse::<PsdFamily>().map_err(err)?, f_d, snr_db, kinds);
    spec.beta = beta;
    spec.units = units.parse::<Units>().map_err(err)?;
    spec.seed = seed;
    spec.mc_samples = mc_samples;
    spec.cm_points = cm_points;
    py.detach(|| sweep::run_sweep(&spec)).map(|r| r.to_csv()).map_err(err)
}

/// Dataset of figure n (1–7) as CSV text.
#[pyfunction]
#[pyo3(signature = (n, seed=0x5eed, mc_samples=20_000))]
fn figure(py: Python<'_>, n: u8, seed: u64, mc_samples: usize) -> PyResult<String> {
    let opts = FigureOptions { seed, mc_samples, ..FigureOptions::default() };
    py.detach(|| sweep::figure(n, &opts)).map(|r| r.to_csv()).map_err(err)
}

/// Runs the verification suite; returns (passed, report).
#[pyfunction]
#[pyo3(signature = (level="fast", seed=0x5eed))]
fn run_verify(py: Python<'_>, level: &str, seed: u64) -> PyResult<(bool, String)> {
    let lvl = match level {
        "fast" => Level::Fast,
        "full" => Level::Full,
        _ => return Err(PyValueError::new_err("level must be 'fast' or 'full'")),
    };
    let r = py.detach(|| verify::run_verify(lvl, seed));
    Ok((r.passed(), r.render()))
}

#[pymodule]
fn pyrayleigh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannelParams>()?;
    m.add_class::<PyPsdModel>()?;
    m.add_class::<PyBoundValue>()?;
    m.add_function(wrap_pyfunction!(bound_kinds, m)?)?;
    m.add_function(wrap_pyfunction!(g_logmoment, m)?)?;
    m.add_function(wrap_pyfunction!(szego_log_integral, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_bound, m)?)?;
    m.add_function(wrap_pyfunction!(pred_error_finite, m)?)?;
    m.add_function(wrap_pyfunction!(pred_error_cm_infinite, m)?)?;
    m.add_function(wrap_pyfunction!(sd_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(gen_fading, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
