//! Pulse observables: delay/advance, width, loss, and shape fidelity.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::trace::{IntensityTrace, RealSpectrum};

/// Delay estimator choice. The three estimators agree for a rigidly shifted
/// pulse; a reshaped pulse pulls them apart, which is itself diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayMethod {
    /// Difference of intensity-weighted mean times.
    Centroid,
    /// Difference of parabolic-interpolated maxima.
    Peak,
    /// Argmax of the normalized cross-correlation, parabolic-interpolated.
    Xcorr,
}

impl DelayMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "centroid" => Ok(Self::Centroid),
            "peak" => Ok(Self::Peak),
            "xcorr" => Ok(Self::Xcorr),
            other => Err(Error::InvalidArg(format!("unknown delay method '{other}'"))),
        }
    }
}

fn check_pair(a: &IntensityTrace, b: &IntensityTrace) -> Result<()> {
    if a.grid() != b.grid() {
        return Err(Error::InvalidArg("traces are on different grids".into()));
    }
    if a.samples().iter().sum::<f64>() <= 0.0 {
        return Err(Error::Degenerate("first trace has zero energy".into()));
    }
    if b.samples().iter().sum::<f64>() <= 0.0 {
        return Err(Error::Degenerate("second trace has zero energy".into()));
    }
    Ok(())
}

fn centroid(trace: &IntensityTrace) -> f64 {
    let g = trace.grid();
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &s) in trace.samples().iter().enumerate() {
        num += g.time_at(i) * s;
        den += s;
    }
    num / den
}

// Parabolic refinement of a sampled maximum; returns the fractional index.
fn parabolic_argmax(samples: &[f64]) -> f64 {
    let m = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    if m == 0 || m == samples.len() - 1 {
        return m as f64;
    }
    let (ym1, y0, yp1) = (samples[m - 1], samples[m], samples[m + 1]);
    let denom = ym1 - 2.0 * y0 + yp1;
    if denom >= 0.0 {
        return m as f64;
    }
    m as f64 + 0.5 * (ym1 - yp1) / denom
}

/// Circular cross-correlation c[k] = sum_i b[i] a[i-k]: positive-lag peak
/// means b lags (is delayed relative to) a.
fn cross_correlation(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let mut fa: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut fb: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    let mut cross: Vec<Complex64> = fb.iter().zip(&fa).map(|(y, x)| y * x.conj()).collect();
    planner.plan_fft_inverse(n).process(&mut cross);
    cross.into_iter().map(|c| c.re / n as f64).collect()
}

// Peak lag of the cross-correlation in (fractional) samples, in [-n/2, n/2).
fn xcorr_lag(a: &[f64], b: &[f64]) -> f64 {
    let c = cross_correlation(a, b);
    let n = c.len();
    let m = c
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let (ym1, y0, yp1) = (c[(m + n - 1) % n], c[m], c[(m + 1) % n]);
    let denom = ym1 - 2.0 * y0 + yp1;
    let frac = if denom < 0.0 { 0.5 * (ym1 - yp1) / denom } else { 0.0 };
    let signed = if m > n / 2 { m as f64 - n as f64 } else { m as f64 };
    signed + frac
}

/// Delay of `output` relative to `input`; positive means the output is later.
pub fn delay(input: &IntensityTrace, output: &IntensityTrace, method: DelayMethod) -> Result<f64> {
    check_pair(input, output)?;
    let dt = input.grid().dt();
    Ok(match method {
        DelayMethod::Centroid => centroid(output) - centroid(input),
        DelayMethod::Peak => {
            (parabolic_argmax(output.samples()) - parabolic_argmax(input.samples())) * dt
        }
        DelayMethod::Xcorr => xcorr_lag(input.samples(), output.samples()) * dt,
    })
}

/// Peak normalized intensity cross-correlation: max over shift of
/// sum(Ia(t) Ib(t - tau)) / sqrt(sum Ia^2 sum Ib^2). Shift- and
/// scale-invariant; 1 iff the shapes agree up to shift and scale.
pub fn fidelity(a: &IntensityTrace, b: &IntensityTrace) -> Result<f64> {
    check_pair(a, b)?;
    let c = cross_correlation(a.samples(), b.samples());
    let norm = (a.samples().iter().map(|x| x * x).sum::<f64>()
        * b.samples().iter().map(|x| x * x).sum::<f64>())
    .sqrt();
    let n = c.len();
    let m = c
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let (ym1, y0, yp1) = (c[(m + n - 1) % n], c[m], c[(m + 1) % n]);
    let denom = ym1 - 2.0 * y0 + yp1;
    let peak = if denom < 0.0 {
        y0 - (ym1 - yp1) * (ym1 - yp1) / (8.0 * denom)
    } else {
        y0
    };
    Ok((peak / norm).clamp(0.0, 1.0))
}

/// All half-maximum crossings of `ys` over `xs`, linearly interpolated.
pub fn half_crossings(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InvalidArg("need matching xs/ys with >= 3 points".into()));
    }
    let peak = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if peak.is_nan() || peak <= 0.0 {
        return Err(Error::Degenerate("no positive maximum".into()));
    }
    let half = 0.5 * peak;
    let mut crossings = Vec::new();
    for i in 0..ys.len() - 1 {
        let (y0, y1) = (ys[i], ys[i + 1]);
        let up = y0 < half && y1 >= half;
        let down = y0 >= half && y1 < half;
        if up || down {
            let t = (half - y0) / (y1 - y0);
            crossings.push(xs[i] + t * (xs[i + 1] - xs[i]));
        }
    }
    Ok(crossings)
}

/// Full width at half maximum by linear interpolation of the two half-level
/// crossings. A multimodal input crossing the half level more than twice
/// yields [`Error::AmbiguousWidth`] carrying every crossing so the caller
/// can pick a policy.
pub fn fwhm(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let crossings = half_crossings(xs, ys)?;
    match crossings.len() {
        2 => Ok(crossings[1] - crossings[0]),
        0 | 1 => Err(Error::Degenerate(
            "half-maximum level not crossed on both sides".into(),
        )),
        _ => Err(Error::AmbiguousWidth { crossings }),
    }
}

/// Width between the outermost half-maximum crossings: the policy pipeline
/// reports use for multimodal traces (the envelope width).
pub fn fwhm_outermost(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let crossings = half_crossings(xs, ys)?;
    if crossings.len() < 2 {
        return Err(Error::Degenerate(
            "half-maximum level not crossed on both sides".into(),
        ));
    }
    Ok(crossings[crossings.len() - 1] - crossings[0])
}

/// FWHM of a time-domain intensity trace, in seconds.
pub fn fwhm_time(trace: &IntensityTrace) -> Result<f64> {
    fwhm(&trace.grid().times(), trace.samples())
}

/// FWHM of a real spectrum, in Hz.
pub fn fwhm_spectrum(spectrum: &RealSpectrum) -> Result<f64> {
    fwhm(&spectrum.grid().detunings(), spectrum.values())
}

/// Energy loss 1 - sum(out)/sum(in) and peak transmission max(out)/max(in).
pub fn loss_and_peak(input: &IntensityTrace, output: &IntensityTrace) -> Result<(f64, f64)> {
    if input.samples().iter().sum::<f64>() <= 0.0 {
        return Err(Error::Degenerate("input trace has zero energy".into()));
    }
    let loss = 1.0 - output.samples().iter().sum::<f64>() / input.samples().iter().sum::<f64>();
    let peak = output.peak() / input.peak();
    Ok((loss, peak))
}

/// The numbers the experiments report, bundled for serialization.
///
/// For a simulation run: delays, loss and peak transmission compare output
/// to input; `fidelity` compares the reshaped pulse to the input; the widths
/// describe the output trace and spectrum. For a plain pairwise analysis all
/// fields compare the second trace to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub delay_centroid: f64,
    pub delay_peak: f64,
    pub delay_xcorr: f64,
    pub fwhm_time: f64,
    pub fwhm_spectrum: f64,
    pub energy_loss: f64,
    pub peak_transmission: f64,
    pub fidelity: f64,
}

impl AnalysisReport {
    /// JSON document mirroring the field names, with fixed 9-significant-
    /// digit formatting for byte-stable output.
    pub fn to_json(&self) -> String {
        format!(
            "{{\n  \"delay_centroid\": {:.8e},\n  \"delay_peak\": {:.8e},\n  \"delay_xcorr\": {:.8e},\n  \"fwhm_time\": {:.8e},\n  \"fwhm_spectrum\": {:.8e},\n  \"energy_loss\": {:.8e},\n  \"peak_transmission\": {:.8e},\n  \"fidelity\": {:.8e}\n}}\n",
            self.delay_centroid,
            self.delay_peak,
            self.delay_xcorr,
            self.fwhm_time,
            self.fwhm_spectrum,
            self.energy_loss,
            self.peak_transmission,
            self.fidelity,
        )
    }
}
