//! Pipeline orchestration behind the CLI subcommands: build the experiment
//! from a config, write every artifact, and return the key results so
//! library callers and tests can inspect them without re-reading files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::compensation;
use crate::config::{ExperimentConfig, MediumConfig, PulseKind};
use crate::error::{Error, Result};
use crate::fit;
use crate::fourier;
use crate::grid::SampledGrid;
use crate::io;
use crate::medium::{kk_grid, kk_min_phase, LorentzianEitModel, PhasePolicy, TransferFunction};
use crate::metrics::{self, AnalysisReport, DelayMethod};
use crate::plot::LineChart;
use crate::propagation;
use crate::pulse::{gen_amg, gen_gaussian, AmgSpec, GaussianSpec};
use crate::trace::{IntensityTrace, RealSpectrum};

/// Everything a simulation run produces, with the written file paths.
pub struct SimulateArtifacts {
    pub report: AnalysisReport,
    pub input: IntensityTrace,
    pub output: IntensityTrace,
    pub reshaped: IntensityTrace,
    pub files: Vec<PathBuf>,
}

fn build_report(
    input: &IntensityTrace,
    output: &IntensityTrace,
    fidelity_against: &IntensityTrace,
    output_spectrum: &RealSpectrum,
) -> Result<AnalysisReport> {
    let (energy_loss, peak_transmission) = metrics::loss_and_peak(input, output)?;
    let fwhm_time = metrics::fwhm_time(output).or_else(|e| match e {
        // multimodal trace: report the envelope width (outermost crossings)
        Error::AmbiguousWidth { .. } => {
            metrics::fwhm_outermost(&output.grid().times(), output.samples())
        }
        other => Err(other),
    })?;
    let fwhm_spectrum = metrics::fwhm_spectrum(output_spectrum).or_else(|e| match e {
        Error::AmbiguousWidth { .. } => metrics::fwhm_outermost(
            &output_spectrum.grid().detunings(),
            output_spectrum.values(),
        ),
        other => Err(other),
    })?;
    Ok(AnalysisReport {
        delay_centroid: metrics::delay(input, output, DelayMethod::Centroid)?,
        delay_peak: metrics::delay(input, output, DelayMethod::Peak)?,
        delay_xcorr: metrics::delay(input, output, DelayMethod::Xcorr)?,
        fwhm_time,
        fwhm_spectrum,
        energy_loss,
        peak_transmission,
        fidelity: metrics::fidelity(fidelity_against, input)?,
    })
}

fn medium_from_config(config: &ExperimentConfig) -> Result<TransferFunction> {
    match &config.medium {
        MediumConfig::Lorentzian(model) => Ok(TransferFunction::from_model(*model)),
        MediumConfig::MeasuredFile { path, phase_policy } => {
            let measured = io::read_measured_spectrum(path)?;
            TransferFunction::from_measured(measured, *phase_policy)
        }
    }
}

/// Runs the full pipeline: synthesize (or load) the input pulse, propagate,
/// compensate, reshape, decompose, and write traces, spectra, the report and
/// (optionally) plots into `outdir`.
pub fn run_simulate(
    config: &ExperimentConfig,
    outdir: &Path,
    plots: bool,
) -> Result<SimulateArtifacts> {
    fs::create_dir_all(outdir)?;
    let mut files = Vec::new();

    // input pulse on its grid
    let input: IntensityTrace = match &config.pulse.kind {
        PulseKind::Gaussian | PulseKind::Amg => {
            let grid = match config.grid.dt_s {
                Some(dt) => {
                    let n = config.grid.n_samples;
                    SampledGrid::new(n, dt, -0.5 * n as f64 * dt)?
                }
                None => {
                    let mod_freq = if config.pulse.kind == PulseKind::Amg {
                        config.pulse.mod_freq_hz
                    } else {
                        0.0
                    };
                    SampledGrid::auto_with(config.grid.n_samples, config.pulse.t_half_s, mod_freq)?
                }
            };
            let base = GaussianSpec::new(config.pulse.t_half_s, config.pulse.center_s)?;
            if config.pulse.kind == PulseKind::Amg {
                gen_amg(&AmgSpec::new(base, config.pulse.mod_freq_hz)?, &grid)?
            } else {
                gen_gaussian(&base, &grid)?
            }
        }
        PulseKind::File(path) => {
            let (times, values) = io::read_trace_csv(path)?;
            io::resample_to_grid(&times, &values)?
        }
    };
    let grid = input.grid().clone();

    let tf = medium_from_config(config)?;

    // propagate and compensate
    let amplitude = input.to_amplitude();
    let in_spec = fourier::forward_amplitude(&amplitude);
    let out_field = propagation::propagate(&amplitude, &tf)?;
    let output = out_field.intensity();
    let out_spec = fourier::forward_transform(&out_field);
    let comp_spec = compensation::compensate_spectrum(&out_spec, &tf, config.reg_eps)?;
    let reshaped = compensation::reshape(&comp_spec);

    // rescaled output: normalized to the input peak
    let scale = input.peak() / output.peak().max(f64::MIN_POSITIVE);
    let rescaled = IntensityTrace::new(
        grid.clone(),
        output.samples().iter().map(|&s| s * scale).collect(),
    )?;

    let mut write_trace = |name: &str, trace: &IntensityTrace| -> Result<()> {
        let path = outdir.join(name);
        io::write_trace_csv(&path, trace)?;
        files.push(path);
        Ok(())
    };
    write_trace("input_trace.csv", &input)?;
    write_trace("output_trace.csv", &output)?;
    write_trace("rescaled_trace.csv", &rescaled)?;
    write_trace("reshaped_trace.csv", &reshaped)?;

    let in_int = in_spec.intensity_spectrum();
    let out_int = out_spec.intensity_spectrum();
    let comp_int = comp_spec.intensity_spectrum();
    let transmission = RealSpectrum::new(
        grid.clone(),
        tf.sample_amplitude(&grid)?.iter().map(|a| a * a).collect(),
    )?;
    for (name, spectrum) in [
        ("input_spectrum.csv", &in_int),
        ("output_spectrum.csv", &out_int),
        ("compensated_spectrum.csv", &comp_int),
        ("transmission.csv", &transmission),
    ] {
        let path = outdir.join(name);
        io::write_spectrum_csv(&path, spectrum)?;
        files.push(path);
    }

    // per-band components of the propagated field
    if let Some(decomp) = &config.decomposition {
        let components =
            propagation::decompose_bands(&out_spec, &decomp.centers_hz, decomp.half_width_hz)?;
        for (k, (component, center)) in components.iter().zip(&decomp.centers_hz).enumerate() {
            let path = outdir.join(format!("band_component_{k}.csv"));
            let trace = component.intensity();
            let mut text = format!("# band center {center:.8e} Hz\n");
            text.push_str("time_s,intensity\n");
            for (i, &v) in trace.samples().iter().enumerate() {
                text.push_str(&format!("{:.8e},{v:.8e}\n", grid.time_at(i)));
            }
            fs::write(&path, text)?;
            files.push(path);
        }
    }

    let report = build_report(&input, &output, &reshaped, &out_int)?;
    let report_path = outdir.join("report.json");
    io::write_report_json(&report_path, &report)?;
    files.push(report_path);

    if plots {
        let times_us: Vec<f64> = grid.times().iter().map(|t| t * 1e6).collect();
        let mut chart = LineChart::new("pulses", "time (us)", "intensity (arb.)");
        chart.add_trace("input", &times_us, input.samples());
        chart.add_trace("output", &times_us, output.samples());
        chart.add_trace("rescaled", &times_us, rescaled.samples());
        chart.add_trace("reshaped", &times_us, reshaped.samples());
        let path = outdir.join("time_domain.svg");
        chart.write_svg(&path)?;
        files.push(path);

        let freqs_khz: Vec<f64> = grid.detunings().iter().map(|f| f * 1e-3).collect();
        let peak = in_int.peak().max(f64::MIN_POSITIVE);
        let norm = |s: &RealSpectrum| -> Vec<f64> { s.values().iter().map(|v| v / peak).collect() };
        let mut chart = LineChart::new(
            "spectra (normalized) with transmission",
            "detuning (kHz)",
            "intensity / transmission",
        );
        chart.add_trace("input", &freqs_khz, &norm(&in_int));
        chart.add_trace("output", &freqs_khz, &norm(&out_int));
        chart.add_trace("compensated", &freqs_khz, &norm(&comp_int));
        chart.add_trace("transmission", &freqs_khz, transmission.values());
        let path = outdir.join("spectra.svg");
        chart.write_svg(&path)?;
        files.push(path);
    }

    Ok(SimulateArtifacts {
        report,
        input,
        output,
        reshaped,
        files,
    })
}

/// File-route compensation: reads a recorded output trace and a transmission
/// table, reshapes, and writes the compensated spectrum, reshaped trace and
/// a report comparing the reshaped pulse against the recorded one.
pub fn run_compensate(
    trace_path: &Path,
    transmission_path: &Path,
    reg_eps: f64,
    outdir: &Path,
    plots: bool,
) -> Result<(AnalysisReport, Vec<PathBuf>)> {
    fs::create_dir_all(outdir)?;
    let (times, values) = io::read_trace_csv(trace_path)?;
    let recorded = io::resample_to_grid(&times, &values)?;
    let measured = io::read_measured_spectrum(transmission_path)?;
    let tf = TransferFunction::from_measured(measured, PhasePolicy::None)?;

    let (comp_spec, reshaped) = compensation::compensate_trace(&recorded, &tf, reg_eps)?;

    let mut files = Vec::new();
    let comp_path = outdir.join("compensated_spectrum.csv");
    io::write_spectrum_csv(&comp_path, &comp_spec.intensity_spectrum())?;
    files.push(comp_path);
    let reshaped_path = outdir.join("reshaped_trace.csv");
    io::write_trace_csv(&reshaped_path, &reshaped)?;
    files.push(reshaped_path);

    let out_int = fourier::forward_amplitude(&recorded.to_amplitude()).intensity_spectrum();
    let report = build_report(&recorded, &reshaped, &reshaped, &out_int)?;
    let report_path = outdir.join("report.json");
    io::write_report_json(&report_path, &report)?;
    files.push(report_path);

    if plots {
        let grid = recorded.grid();
        let times_us: Vec<f64> = grid.times().iter().map(|t| t * 1e6).collect();
        let mut chart = LineChart::new("compensation", "time (us)", "intensity (arb.)");
        chart.add_trace("recorded", &times_us, recorded.samples());
        chart.add_trace("reshaped", &times_us, reshaped.samples());
        let path = outdir.join("time_domain.svg");
        chart.write_svg(&path)?;
        files.push(path);
    }

    Ok((report, files))
}

/// Fits the Lorentzian window model to a transmission table and writes the
/// fitted parameters as a reusable config fragment.
pub fn run_fit(
    transmission_path: &Path,
    outdir: &Path,
) -> Result<(LorentzianEitModel, f64, PathBuf)> {
    fs::create_dir_all(outdir)?;
    let measured = io::read_measured_spectrum(transmission_path)?;
    let (model, rms) = fit::fit_lorentzian(&measured, None)?;
    let path = outdir.join("fitted_model.cfg");
    let text = format!(
        "# fitted transmission model (rms residual {rms:.8e})\nmedium.kind = lorentzian\nmedium.gamma_hz = {:.8e}\nmedium.depth = {:.8e}\nmedium.floor = {:.8e}\n",
        model.gamma_hz(),
        model.depth(),
        model.floor()
    );
    fs::write(&path, text)?;
    Ok((model, rms, path))
}

/// Pairwise comparison of two recorded traces. Returns the report and any
/// warnings (e.g. grid mismatch handled by resampling).
pub fn run_analyze(
    input_path: &Path,
    output_path: &Path,
    outdir: &Path,
) -> Result<(AnalysisReport, Vec<String>, PathBuf)> {
    fs::create_dir_all(outdir)?;
    let (ta, va) = io::read_trace_csv(input_path)?;
    let (tb, vb) = io::read_trace_csv(output_path)?;
    let mut warnings = Vec::new();

    let same_axis = ta.len() == tb.len()
        && (ta[0] - tb[0]).abs() <= 1e-12 * ta[0].abs().max(1.0)
        && (ta[ta.len() - 1] - tb[tb.len() - 1]).abs()
            <= 1e-12 * ta[ta.len() - 1].abs().max(1.0);
    let (input, output) = if same_axis {
        (
            io::resample_to_grid(&ta, &va)?,
            io::resample_to_grid(&tb, &vb)?,
        )
    } else {
        warnings.push(format!(
            "traces have mismatched grids ({} vs {} samples); resampled to a common grid",
            ta.len(),
            tb.len()
        ));
        io::resample_to_common_grid((&ta, &va), (&tb, &vb))?
    };

    let out_int = fourier::forward_amplitude(&output.to_amplitude()).intensity_spectrum();
    let report = build_report(&input, &output, &output, &out_int)?;
    let path = outdir.join("report.json");
    io::write_report_json(&path, &report)?;
    Ok((report, warnings, path))
}

/// Minimum-phase reconstruction from a transmission table; writes the phase
/// and its group delay on the table's internal evaluation grid.
pub fn run_kk(transmission_path: &Path, outdir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(outdir)?;
    let measured = io::read_measured_spectrum(transmission_path)?;
    let grid = kk_grid(&measured)?;
    let phase = kk_min_phase(&measured, &grid)?;
    let detunings = grid.detunings();

    let mut files = Vec::new();
    let phase_path = outdir.join("kk_phase.csv");
    io::write_spectrum_columns(&phase_path, &detunings, &phase, Some("minimum phase, radians"))?;
    files.push(phase_path);

    // central-difference group delay of the reconstructed phase
    let two_pi = 2.0 * std::f64::consts::PI;
    let n = phase.len();
    let gd: Vec<f64> = (0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (phase[hi] - phase[lo]) / (two_pi * (detunings[hi] - detunings[lo]))
        })
        .collect();
    let gd_path = outdir.join("kk_group_delay.csv");
    io::write_spectrum_columns(&gd_path, &detunings, &gd, Some("group delay, seconds"))?;
    files.push(gd_path);
    Ok(files)
}
