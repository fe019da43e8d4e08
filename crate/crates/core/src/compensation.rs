//! Spectral compensation: divide the output spectrum by the measured
//! transmission (Wiener-regularized) and return to the time domain.
//!
//! Only magnitudes are compensated — the intensity-domain rule
//! I_comp(f) = I_out(f) / |A(f)|^2 is phase-blind, so the output phase is
//! kept. The reshaped pulse therefore retains each spectral component's
//! dispersion-induced timing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;
use crate::medium::TransferFunction;
use crate::trace::{ComplexSpectrum, IntensityTrace};

/// Default regularization, relative to the peak amplitude transmission.
pub const DEFAULT_REG_EPS: f64 = 1e-3;

/// Bins carrying at least this fraction of the output energy must be
/// recoverable when compensation runs unregularized.
const BLOWUP_ENERGY_FRACTION: f64 = 1e-9;

/// Compensated field spectrum E_comp(f) = E_out(f) A / (A^2 + eps^2), with
/// eps = `reg_eps` x max A. Where A >> eps this is E_out / A, implementing
/// I_comp = I_out / |A|^2 at the intensity level; the gain never exceeds
/// 1/(2 eps).
pub fn compensate_spectrum(
    out_spec: &ComplexSpectrum,
    tf: &TransferFunction,
    reg_eps: f64,
) -> Result<ComplexSpectrum> {
    if !reg_eps.is_finite() || reg_eps < 0.0 {
        return Err(Error::InvalidArg(format!("reg_eps = {reg_eps} must be >= 0")));
    }
    let amps = tf.sample_amplitude(out_spec.grid())?;
    let max_a = amps.iter().cloned().fold(0.0_f64, f64::max);
    let eps = reg_eps * max_a;

    if eps == 0.0 {
        let total: f64 = out_spec.bins().iter().map(|b| b.norm_sqr()).sum();
        let blocked: f64 = out_spec
            .bins()
            .iter()
            .zip(&amps)
            .filter(|(_, &a)| a == 0.0)
            .map(|(b, _)| b.norm_sqr())
            .sum();
        if total > 0.0 && blocked / total > BLOWUP_ENERGY_FRACTION {
            return Err(Error::DivisionBlowup {
                fraction: blocked / total,
            });
        }
    }

    let bins: Vec<Complex64> = out_spec
        .bins()
        .iter()
        .zip(&amps)
        .map(|(b, &a)| {
            let denom = a * a + eps * eps;
            if denom == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                b * (a / denom)
            }
        })
        .collect();
    ComplexSpectrum::new(out_spec.grid().clone(), bins)
}

/// The reshaped pulse: |inverse_transform(compensated spectrum)|^2.
pub fn reshape(comp_spec: &ComplexSpectrum) -> IntensityTrace {
    fourier::inverse_transform(comp_spec).intensity()
}

/// File-route chain shared by the CLI: take a recorded output intensity
/// trace, form E = sqrt(I), compensate its spectrum against the measured
/// transmission, and reshape. Returns (compensated spectrum, reshaped trace).
pub fn compensate_trace(
    out_intensity: &IntensityTrace,
    tf: &TransferFunction,
    reg_eps: f64,
) -> Result<(ComplexSpectrum, IntensityTrace)> {
    let spec = fourier::forward_amplitude(&out_intensity.to_amplitude());
    let comp = compensate_spectrum(&spec, tf, reg_eps)?;
    let reshaped = reshape(&comp);
    Ok((comp, reshaped))
}
