//! Python bindings for `debyefit`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use ::debyefit as core;
use ::debyefit::{diagnostics, io, selftest, DebyeComponent, ParameterVector, PhysicalConstants};

create_exception!(debyefit, DebyefitError, PyException);

fn err(e: core::Error) -> PyErr {
    DebyefitError::new_err(e.to_string())
}

fn params(amplitudes: &[f64], peak_temperatures: &[f64]) -> PyResult<ParameterVector> {
    ParameterVector::from_amplitudes_and_temperatures(amplitudes, peak_temperatures).map_err(err)
}

/// Measured spectrum: temperatures (K), intensities and optional error variance.
#[pyclass(module = "debyefit", frozen)]
struct Spectrum {
    inner: core::Spectrum,
}

#[pymethods]
impl Spectrum {
    #[new]
    #[pyo3(signature = (temperatures, intensities, var_eps=None))]
    fn new(temperatures: Vec<f64>, intensities: Vec<f64>, var_eps: Option<f64>) -> PyResult<Self> {
        Ok(Self { inner: core::Spectrum::new(temperatures, intensities, var_eps).map_err(err)? })
    }

    #[staticmethod]
    fn read_csv(path: &str) -> PyResult<Self> {
        Ok(Self { inner: io::read_spectrum_csv_path(path).map_err(err)? })
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        io::write_spectrum_csv_path(&self.inner, path).map_err(err)
    }

    #[getter]
    fn temperatures(&self) -> Vec<f64> {
        self.inner.temperatures().to_vec()
    }

    #[getter]
    fn intensities(&self) -> Vec<f64> {
        self.inner.intensities().to_vec()
    }

    #[getter]
    fn var_eps(&self) -> Option<f64> {
        self.inner.var_eps()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum(n={}, var_eps={:?})", self.inner.len(), self.inner.var_eps())
    }
}

/// Sum of Debye peaks at a fixed measurement frequency.
#[pyclass(module = "debyefit", frozen)]
struct DebyeModel {
    inner: core::DebyeModel,
}

#[pymethods]
impl DebyeModel {
    #[new]
    fn new(frequency: f64) -> PyResult<Self> {
        Ok(Self { inner: core::DebyeModel::new(frequency).map_err(err)? })
    }

    #[getter]
    fn frequency(&self) -> f64 {
        self.inner.frequency
    }

    fn activation_energy(&self, t0: f64) -> PyResult<f64> {
        self.inner.activation_energy(t0).map_err(err)
    }

    fn evaluate(
        &self,
        temperatures: Vec<f64>,
        amplitudes: Vec<f64>,
        peak_temperatures: Vec<f64>,
    ) -> PyResult<Vec<f64>> {
        self.inner.evaluate(&temperatures, &params(&amplitudes, &peak_temperatures)?).map_err(err)
    }

    /// Rows are grid points; columns are all amplitudes, then all peak temperatures.
    fn jacobian(
        &self,
        temperatures: Vec<f64>,
        amplitudes: Vec<f64>,
        peak_temperatures: Vec<f64>,
    ) -> PyResult<Vec<Vec<f64>>> {
        let j = self.inner.jacobian(&temperatures, &params(&amplitudes, &peak_temperatures)?).map_err(err)?;
        Ok(j.row_iter().map(|r| r.iter().copied().collect()).collect())
    }
}

#[pyclass(module = "debyefit", frozen, get_all)]
struct FitResult {
    amplitudes: Vec<f64>,
    peak_temperatures: Vec<f64>,
    residuals: Vec<f64>,
    sse: f64,
    iterations: usize,
    converged: bool,
    termination_reason: String,
}

impl From<&core::FitResult> for FitResult {
    fn from(f: &core::FitResult) -> Self {
        let reason = match f.termination_reason {
            core::TerminationReason::Gradient => "gradient",
            core::TerminationReason::Step => "step",
            core::TerminationReason::Sse => "sse",
            core::TerminationReason::MaxIterations => "max_iterations",
        };
        Self {
            amplitudes: f.params.amplitudes().to_vec(),
            peak_temperatures: f.params.peak_temperatures().to_vec(),
            residuals: f.residuals.clone(),
            sse: f.sse,
            iterations: f.iterations,
            converged: f.converged,
            termination_reason: reason.into(),
        }
    }
}

#[pymethods]
impl FitResult {
    fn __repr__(&self) -> String {
        format!(
            "FitResult(n_components={}, sse={:e}, termination_reason={:?})",
            self.amplitudes.len(),
            self.sse,
            self.termination_reason
        )
    }
}

#[pyclass(module = "debyefit", frozen, get_all)]
struct TestResult {
    statistic: f64,
    p_value: f64,
    passed: bool,
    alpha: f64,
}

impl From<diagnostics::TestResult> for TestResult {
    fn from(t: diagnostics::TestResult) -> Self {
        Self { statistic: t.statistic, p_value: t.p_value, passed: t.passed, alpha: t.alpha }
    }
}

#[pymethods]
impl TestResult {
    fn __repr__(&self) -> String {
        format!("TestResult(statistic={}, p_value={}, passed={})", self.statistic, self.p_value, self.passed)
    }
}

/// Durbin–Watson result; `lags` holds `(lag, statistic, p_value)` tuples.
#[pyclass(module = "debyefit", frozen, get_all)]
struct DurbinWatsonResult {
    lags: Vec<(usize, f64, f64)>,
    passed: bool,
    alpha: f64,
}

#[pyclass(module = "debyefit", frozen)]
struct DecompositionResult {
    inner: core::DecompositionResult,
}

#[pymethods]
impl DecompositionResult {
    /// `"adequate"` or `"cap_reached"`.
    #[getter]
    fn status(&self) -> &'static str {
        match self.inner.status {
            core::Status::Adequate => "adequate",
            core::Status::CapReached => "cap_reached",
        }
    }

    #[getter]
    fn n_components(&self) -> Option<usize> {
        self.inner.accepted_attempt().map(|a| a.n_components)
    }

    /// Accepted components as `(Q0, T0, E)` tuples; empty when none was accepted.
    #[getter]
    fn components(&self) -> PyResult<Vec<(f64, f64, f64)>> {
        let Some(fit) = self.inner.accepted_attempt().and_then(|a| a.fit.as_ref()) else {
            return Ok(Vec::new());
        };
        let model = self.inner.model().map_err(err)?;
        Ok(model.components(&fit.params).map_err(err)?.iter().map(|c| (c.q0(), c.t0(), c.energy())).collect())
    }

    #[getter]
    fn fit(&self) -> Option<FitResult> {
        self.inner.accepted_attempt().and_then(|a| a.fit.as_ref()).map(Into::into)
    }

    /// Per-attempt `(n_components, sse, adequate)`; `sse` is None if the fit failed.
    #[getter]
    fn attempts(&self) -> Vec<(usize, Option<f64>, bool)> {
        self.inner.attempts.iter().map(|a| (a.n_components, a.fit.as_ref().map(|f| f.sse), a.adequate)).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        io::result_json_string(&self.inner).map_err(err)
    }

    fn plot_svg(&self, spectrum: &Spectrum) -> PyResult<String> {
        io::render_plot_svg(&spectrum.inner, &self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("DecompositionResult(status={:?}, n_components={:?})", self.status(), self.n_components())
    }
}

#[pyfunction]
fn activation_energy(t0: f64, frequency: f64) -> PyResult<f64> {
    core::model::activation_energy(t0, frequency, &PhysicalConstants::CODATA_2018).map_err(err)
}

#[pyfunction]
fn spectrum_model(
    temperatures: Vec<f64>,
    amplitudes: Vec<f64>,
    peak_temperatures: Vec<f64>,
    frequency: f64,
) -> PyResult<Vec<f64>> {
    let model = core::DebyeModel::new(frequency).map_err(err)?;
    model.evaluate(&temperatures, &params(&amplitudes, &peak_temperatures)?).map_err(err)
}

/// Levenberg–Marquardt fit from the given starting parameters.
#[pyfunction]
#[pyo3(signature = (spectrum, amplitudes, peak_temperatures, frequency, max_iterations=200))]
fn fit(
    spectrum: &Spectrum,
    amplitudes: Vec<f64>,
    peak_temperatures: Vec<f64>,
    frequency: f64,
    max_iterations: usize,
) -> PyResult<FitResult> {
    let model = core::DebyeModel::new(frequency).map_err(err)?;
    let opts = core::LmOptions { max_iterations, ..core::LmOptions::default() };
    let r = core::fit(&spectrum.inner, &params(&amplitudes, &peak_temperatures)?, &opts, &model).map_err(err)?;
    Ok((&r).into())
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (spectrum, frequency, alpha=0.05, max_components=8, seed=42, dw_reps=1000, dof_mode="corrected"))]
fn decompose(
    py: Python<'_>,
    spectrum: &Spectrum,
    frequency: f64,
    alpha: f64,
    max_components: usize,
    seed: u64,
    dw_reps: usize,
    dof_mode: &str,
) -> PyResult<DecompositionResult> {
    let dof_mode = match dof_mode {
        "corrected" => core::DofMode::Corrected,
        "per_component" => core::DofMode::PerComponent,
        other => return Err(DebyefitError::new_err(format!("unknown dof_mode {other:?}"))),
    };
    let config = core::DecompositionConfig {
        alpha,
        max_components,
        seed,
        dw_reps,
        dof_mode,
        ..core::DecompositionConfig::new(frequency)
    };
    let s = &spectrum.inner;
    let inner = py.detach(|| core::decompose(s, &config)).map_err(err)?;
    Ok(DecompositionResult { inner })
}

/// Synthetic spectrum from `(Q0, T0)` pairs with seeded Gaussian noise.
#[pyfunction]
#[pyo3(signature = (components, frequency=1.0, t_min=350.0, t_max=750.0, n_points=400, noise_sd=0.01, seed=42))]
fn synth(
    components: Vec<(f64, f64)>,
    frequency: f64,
    t_min: f64,
    t_max: f64,
    n_points: usize,
    noise_sd: f64,
    seed: u64,
) -> PyResult<Spectrum> {
    let c = PhysicalConstants::CODATA_2018;
    let components = components
        .iter()
        .map(|&(q0, t0)| DebyeComponent::new(q0, t0, frequency, &c))
        .collect::<core::Result<Vec<_>>>()
        .map_err(err)?;
    let spec = core::SynthSpec { components, t_range: (t_min, t_max), n_points, noise_sd, frequency, seed };
    Ok(Spectrum { inner: core::generate(&spec).map_err(err)?.spectrum })
}

#[pyfunction]
#[pyo3(signature = (sample, alpha=0.05))]
fn anderson_darling_test(sample: Vec<f64>, alpha: f64) -> PyResult<TestResult> {
    Ok(diagnostics::anderson_darling_test(&sample, alpha).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (sample, alpha=0.05))]
fn one_sample_t_test(sample: Vec<f64>, alpha: f64) -> PyResult<TestResult> {
    Ok(diagnostics::one_sample_t_test(&sample, alpha).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (residuals, regressor, max_lag=5, alpha=0.05, reps=1000, seed=42))]
fn durbin_watson_test(
    residuals: Vec<f64>,
    regressor: Vec<f64>,
    max_lag: usize,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> PyResult<DurbinWatsonResult> {
    let r = diagnostics::durbin_watson_test(&residuals, &regressor, max_lag, alpha, reps, seed).map_err(err)?;
    Ok(DurbinWatsonResult {
        lags: r.lags.iter().map(|l| (l.lag, l.statistic, l.p_value)).collect(),
        passed: r.passed,
        alpha: r.alpha,
    })
}

#[pyfunction]
#[pyo3(signature = (residuals, var_eps, n_free_params, alpha=0.05))]
fn variance_f_test(residuals: Vec<f64>, var_eps: f64, n_free_params: usize, alpha: f64) -> PyResult<TestResult> {
    Ok(diagnostics::variance_f_test(&residuals, var_eps, n_free_params, alpha).map_err(err)?.into())
}

/// Runs the reference checks; returns `(n_checks, names of failed checks)`.
#[pyfunction]
fn run_selftest() -> PyResult<(usize, Vec<String>)> {
    let checks = selftest::run().map_err(err)?;
    let failed = checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect();
    Ok((checks.len(), failed))
}

#[pymodule(name = "debyefit")]
fn debyefit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DebyefitError", m.py().get_type::<DebyefitError>())?;
    m.add_class::<Spectrum>()?;
    m.add_class::<DebyeModel>()?;
    m.add_class::<FitResult>()?;
    m.add_class::<TestResult>()?;
    m.add_class::<DurbinWatsonResult>()?;
    m.add_class::<DecompositionResult>()?;
    m.add_function(wrap_pyfunction!(activation_energy, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_model, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    m.add_function(wrap_pyfunction!(anderson_darling_test, m)?)?;
    m.add_function(wrap_pyfunction!(one_sample_t_test, m)?)?;
    m.add_function(wrap_pyfunction!(durbin_watson_test, m)?)?;
    m.add_function(wrap_pyfunction!(variance_f_test, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
