//! Python bindings for the slow-light toolkit: the main types (grids,
//! traces, medium models) and the pipeline operations (pulse synthesis,
//! propagation, compensation, decomposition, metrics, fitting).
//!
//! Build with `cargo build -p slowlight-py --release`, then import the
//! produced cdylib as `slowlight_py` (see python/smoke_test.py).

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use slowlight::compensation;
use slowlight::fourier;
use slowlight::medium;
use slowlight::metrics;
use slowlight::propagation;
use slowlight::pulse;

fn err(e: slowlight::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Uniform time grid with its induced centered detuning axis.
#[pyclass(name = "SampledGrid", from_py_object)]
#[derive(Clone)]
struct PyGrid {
    inner: slowlight::SampledGrid,
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(n_samples: usize, dt: f64, t_start: f64) -> PyResult<Self> {
        Ok(Self {
            inner: slowlight::SampledGrid::new(n_samples, dt, t_start).map_err(err)?,
        })
    }

    /// Grid sized automatically for a pulse half-width and modulation.
    #[staticmethod]
    #[pyo3(signature = (t_half, mod_freq = 0.0))]
    fn auto(t_half: f64, mod_freq: f64) -> PyResult<Self> {
        Ok(Self {
            inner: slowlight::SampledGrid::auto(t_half, mod_freq).map_err(err)?,
        })
    }

    #[getter]
    fn n_samples(&self) -> usize {
        self.inner.n_samples()
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.inner.dt()
    }

    #[getter]
    fn t_start(&self) -> f64 {
        self.inner.t_start()
    }

    #[getter]
    fn df(&self) -> f64 {
        self.inner.df()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    fn detunings(&self) -> Vec<f64> {
        self.inner.detunings()
    }

    fn __repr__(&self) -> String {
        format!(
            "SampledGrid(n_samples={}, dt={:e}, t_start={:e})",
            self.inner.n_samples(),
            self.inner.dt(),
            self.inner.t_start()
        )
    }
}

/// Real intensity trace I(t) on a grid.
#[pyclass(name = "IntensityTrace", from_py_object)]
#[derive(Clone)]
struct PyIntensityTrace {
    inner: slowlight::IntensityTrace,
}

#[pymethods]
impl PyIntensityTrace {
    #[new]
    fn new(grid: PyGrid, samples: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: slowlight::IntensityTrace::new(grid.inner, samples).map_err(err)?,
        })
    }

    fn samples(&self) -> Vec<f64> {
        self.inner.samples().to_vec()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.grid().times()
    }

    fn grid(&self) -> PyGrid {
        PyGrid {
            inner: self.inner.grid().clone(),
        }
    }

    fn energy(&self) -> f64 {
        self.inner.energy()
    }

    fn peak(&self) -> f64 {
        self.inner.peak()
    }

    /// Intensity spectrum |E(f)|^2 of the trace's field sqrt(I); returns
    /// (detunings, values).
    fn intensity_spectrum(&self) -> (Vec<f64>, Vec<f64>) {
        let spec = fourier::forward_amplitude(&self.inner.to_amplitude());
        (
            self.inner.grid().detunings(),
            spec.intensity_spectrum().values().to_vec(),
        )
    }

    /// The trace's field sqrt(I) as a complex trace, e.g. for band
    /// decomposition of an input pulse.
    fn field(&self) -> PyComplexTrace {
        PyComplexTrace {
            inner: self.inner.to_amplitude().to_complex(),
        }
    }
}

/// Complex field trace (post-propagation).
#[pyclass(name = "ComplexTrace", from_py_object)]
#[derive(Clone)]
struct PyComplexTrace {
    inner: slowlight::ComplexTrace,
}

#[pymethods]
impl PyComplexTrace {
    fn samples(&self) -> Vec<Complex64> {
        self.inner.samples().to_vec()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.grid().times()
    }

    fn intensity(&self) -> PyIntensityTrace {
        PyIntensityTrace {
            inner: self.inner.intensity(),
        }
    }

    fn energy(&self) -> f64 {
        self.inner.energy()
    }
}

/// Parametric transparency-window model.
#[pyclass(name = "LorentzianEitModel", from_py_object)]
#[derive(Clone)]
struct PyModel {
    inner: slowlight::LorentzianEitModel,
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(gamma_hz: f64, depth: f64, floor: f64) -> PyResult<Self> {
        Ok(Self {
            inner: slowlight::LorentzianEitModel::new(gamma_hz, depth, floor).map_err(err)?,
        })
    }

    /// Reference window: 350 kHz FWHM, 61.5% peak transmission.
    #[staticmethod]
    fn reference() -> Self {
        Self {
            inner: slowlight::LorentzianEitModel::reference(),
        }
    }

    #[getter]
    fn gamma_hz(&self) -> f64 {
        self.inner.gamma_hz()
    }

    #[getter]
    fn depth(&self) -> f64 {
        self.inner.depth()
    }

    #[getter]
    fn floor(&self) -> f64 {
        self.inner.floor()
    }

    fn amplitude(&self, detuning_hz: f64) -> f64 {
        self.inner.amplitude(detuning_hz)
    }

    fn phase(&self, detuning_hz: f64) -> f64 {
        self.inner.phase(detuning_hz)
    }

    fn transmission(&self, detuning_hz: f64) -> f64 {
        self.inner.transmission(detuning_hz)
    }

    fn __repr__(&self) -> String {
        format!(
            "LorentzianEitModel(gamma_hz={:e}, depth={:e}, floor={:e})",
            self.inner.gamma_hz(),
            self.inner.depth(),
            self.inner.floor()
        )
    }
}

fn parse_phase_policy(s: &str) -> PyResult<medium::PhasePolicy> {
    match s {
        "none" => Ok(medium::PhasePolicy::None),
        "minimum_phase" => Ok(medium::PhasePolicy::MinimumPhase),
        other => Err(PyValueError::new_err(format!(
            "phase_policy must be 'none' or 'minimum_phase', got '{other}'"
        ))),
    }
}

/// The medium as an evaluable complex response H(f) = A(f) e^{i Phi(f)}.
#[pyclass(name = "TransferFunction", from_py_object)]
#[derive(Clone)]
struct PyTransferFunction {
    inner: slowlight::TransferFunction,
}

#[pymethods]
impl PyTransferFunction {
    #[staticmethod]
    fn from_model(model: PyModel) -> Self {
        Self {
            inner: slowlight::TransferFunction::from_model(model.inner),
        }
    }

    /// Builds from (detuning_hz, transmission) points with a phase policy of
    /// "none" or "minimum_phase".
    #[staticmethod]
    #[pyo3(signature = (points, phase_policy = "minimum_phase"))]
    fn from_measured(points: Vec<(f64, f64)>, phase_policy: &str) -> PyResult<Self> {
        let measured = slowlight::MeasuredSpectrum::new(points).map_err(err)?;
        Ok(Self {
            inner: slowlight::TransferFunction::from_measured(
                measured,
                parse_phase_policy(phase_policy)?,
            )
            .map_err(err)?,
        })
    }

    fn eval(&self, detuning_hz: f64) -> PyResult<Complex64> {
        self.inner.eval(detuning_hz).map_err(err)
    }

    fn amplitude(&self, detuning_hz: f64) -> PyResult<f64> {
        self.inner.amplitude_at(detuning_hz).map_err(err)
    }

    fn group_delay(&self, detuning_hz: f64, step_hz: f64) -> PyResult<f64> {
        self.inner.group_delay(detuning_hz, step_hz).map_err(err)
    }
}

/// Gaussian intensity pulse I(t) = exp[-(ln2)(t-c)^2/t_half^2].
#[pyfunction]
#[pyo3(signature = (grid, t_half, t_center = 0.0))]
fn gen_gaussian(grid: PyGrid, t_half: f64, t_center: f64) -> PyResult<PyIntensityTrace> {
    let spec = pulse::GaussianSpec::new(t_half, t_center).map_err(err)?;
    Ok(PyIntensityTrace {
        inner: pulse::gen_gaussian(&spec, &grid.inner).map_err(err)?,
    })
}

/// Amplitude-modulated Gaussian I(t) = I_gauss(t) [1 + cos(2 pi delta t)]^2.
#[pyfunction]
#[pyo3(signature = (grid, t_half, mod_freq, t_center = 0.0))]
fn gen_amg(grid: PyGrid, t_half: f64, mod_freq: f64, t_center: f64) -> PyResult<PyIntensityTrace> {
    let base = pulse::GaussianSpec::new(t_half, t_center).map_err(err)?;
    let spec = pulse::AmgSpec::new(base, mod_freq).map_err(err)?;
    Ok(PyIntensityTrace {
        inner: pulse::gen_amg(&spec, &grid.inner).map_err(err)?,
    })
}

/// T0 whose Gaussian intensity spectrum has the given FWHM.
#[pyfunction]
fn t_half_from_spectral_fwhm(fwhm_hz: f64) -> f64 {
    pulse::t_half_from_spectral_fwhm(fwhm_hz)
}

/// Propagates a pulse (field = sqrt of the intensity trace) through the
/// medium; returns the complex output field.
#[pyfunction]
fn propagate(input: PyIntensityTrace, tf: PyTransferFunction) -> PyResult<PyComplexTrace> {
    Ok(PyComplexTrace {
        inner: propagation::propagate(&input.inner.to_amplitude(), &tf.inner).map_err(err)?,
    })
}

/// Compensates a propagated field against the medium's magnitude and
/// reshapes; returns the reshaped intensity trace.
#[pyfunction]
#[pyo3(signature = (output, tf, reg_eps = compensation::DEFAULT_REG_EPS))]
fn compensate(
    output: PyComplexTrace,
    tf: PyTransferFunction,
    reg_eps: f64,
) -> PyResult<PyIntensityTrace> {
    let out_spec = fourier::forward_transform(&output.inner);
    let comp = compensation::compensate_spectrum(&out_spec, &tf.inner, reg_eps).map_err(err)?;
    Ok(PyIntensityTrace {
        inner: compensation::reshape(&comp),
    })
}

/// File-style compensation of a recorded intensity trace (phase-less
/// E = sqrt(I) route); returns the reshaped intensity trace.
#[pyfunction]
#[pyo3(signature = (recorded, tf, reg_eps = compensation::DEFAULT_REG_EPS))]
fn compensate_trace(
    recorded: PyIntensityTrace,
    tf: PyTransferFunction,
    reg_eps: f64,
) -> PyResult<PyIntensityTrace> {
    let (_, reshaped) =
        compensation::compensate_trace(&recorded.inner, &tf.inner, reg_eps).map_err(err)?;
    Ok(PyIntensityTrace { inner: reshaped })
}

/// Splits a propagated field into per-band components (carrier/sidebands).
#[pyfunction]
fn decompose_bands(
    field: PyComplexTrace,
    centers: Vec<f64>,
    half_width: f64,
) -> PyResult<Vec<PyComplexTrace>> {
    let spec = fourier::forward_transform(&field.inner);
    Ok(propagation::decompose_bands(&spec, &centers, half_width)
        .map_err(err)?
        .into_iter()
        .map(|c| PyComplexTrace { inner: c })
        .collect())
}

/// Delay of `output` relative to `input`; method is "centroid", "peak" or
/// "xcorr".
#[pyfunction]
#[pyo3(signature = (input, output, method = "centroid"))]
fn delay(input: PyIntensityTrace, output: PyIntensityTrace, method: &str) -> PyResult<f64> {
    let m = metrics::DelayMethod::parse(method).map_err(err)?;
    metrics::delay(&input.inner, &output.inner, m).map_err(err)
}

/// Peak normalized intensity cross-correlation (shift/scale invariant).
#[pyfunction]
fn fidelity(a: PyIntensityTrace, b: PyIntensityTrace) -> PyResult<f64> {
    metrics::fidelity(&a.inner, &b.inner).map_err(err)
}

/// FWHM of a trace in seconds.
#[pyfunction]
fn fwhm_time(trace: PyIntensityTrace) -> PyResult<f64> {
    metrics::fwhm_time(&trace.inner).map_err(err)
}

/// (energy_loss, peak_transmission) of output vs input.
#[pyfunction]
fn loss_and_peak(input: PyIntensityTrace, output: PyIntensityTrace) -> PyResult<(f64, f64)> {
    metrics::loss_and_peak(&input.inner, &output.inner).map_err(err)
}

/// Fits the Lorentzian window model to (detuning_hz, transmission) points;
/// returns (model, rms_residual).
#[pyfunction]
fn fit_lorentzian(points: Vec<(f64, f64)>) -> PyResult<(PyModel, f64)> {
    let measured = slowlight::MeasuredSpectrum::new(points).map_err(err)?;
    let (model, rms) = slowlight::fit::fit_lorentzian(&measured, None).map_err(err)?;
    Ok((PyModel { inner: model }, rms))
}

/// Minimum-phase reconstruction of a measured transmission; returns
/// (detunings, phase) on the table's internal evaluation grid.
#[pyfunction]
fn kk_min_phase(points: Vec<(f64, f64)>) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let measured = slowlight::MeasuredSpectrum::new(points).map_err(err)?;
    let grid = medium::kk_grid(&measured).map_err(err)?;
    let phase = medium::kk_min_phase(&measured, &grid).map_err(err)?;
    Ok((grid.detunings(), phase))
}

#[pymodule]
fn slowlight_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyIntensityTrace>()?;
    m.add_class::<PyComplexTrace>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyTransferFunction>()?;
    m.add_function(wrap_pyfunction!(gen_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(gen_amg, m)?)?;
    m.add_function(wrap_pyfunction!(t_half_from_spectral_fwhm, m)?)?;
    m.add_function(wrap_pyfunction!(propagate, m)?)?;
    m.add_function(wrap_pyfunction!(compensate, m)?)?;
    m.add_function(wrap_pyfunction!(compensate_trace, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_bands, m)?)?;
    m.add_function(wrap_pyfunction!(delay, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(fwhm_time, m)?)?;
    m.add_function(wrap_pyfunction!(loss_and_peak, m)?)?;
    m.add_function(wrap_pyfunction!(fit_lorentzian, m)?)?;
    m.add_function(wrap_pyfunction!(kk_min_phase, m)?)?;
    Ok(())
}
