//! Frequency-domain propagation through the medium and carrier/sideband
//! decomposition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;
use crate::medium::TransferFunction;
use crate::trace::{AmplitudeTrace, ComplexSpectrum, ComplexTrace, RealSpectrum};

/// Fraction of pulse energy allowed outside the central half of the grid.
/// FFT propagation is circular; the guard bands keep wraparound from
/// contaminating delay measurements.
const GUARD_TOL: f64 = 1e-6;

fn check_guard_band(input: &AmplitudeTrace) -> Result<()> {
    let n = input.grid().n_samples();
    let total: f64 = input.samples().iter().map(|&s| s * s).sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("input trace has zero energy".into()));
    }
    let central: f64 = input.samples()[n / 4..3 * n / 4]
        .iter()
        .map(|&s| s * s)
        .sum();
    let outside = 1.0 - central / total;
    if outside > GUARD_TOL {
        return Err(Error::GuardBand { fraction: outside });
    }
    Ok(())
}

/// Propagates an input field through the medium:
/// output = inverse_transform(H(f) * forward_transform(input)).
pub fn propagate(input: &AmplitudeTrace, tf: &TransferFunction) -> Result<ComplexTrace> {
    check_guard_band(input)?;
    let spec = fourier::forward_amplitude(input);
    let response = tf.sample(input.grid())?;
    let bins: Vec<Complex64> = spec
        .bins()
        .iter()
        .zip(&response)
        .map(|(b, h)| b * h)
        .collect();
    let out_spec = ComplexSpectrum::new(input.grid().clone(), bins)?;
    Ok(fourier::inverse_transform(&out_spec))
}

/// Intensity-domain transfer |A(f)|^2 |E_in(f)|^2: the phase drops out of
/// magnitudes, so this equals the intensity spectrum of the field-level
/// propagation.
pub fn intensity_transfer(
    input_spec: &ComplexSpectrum,
    tf: &TransferFunction,
) -> Result<RealSpectrum> {
    let amps = tf.sample_amplitude(input_spec.grid())?;
    let values = input_spec
        .bins()
        .iter()
        .zip(&amps)
        .map(|(b, a)| a * a * b.norm_sqr())
        .collect();
    RealSpectrum::new(input_spec.grid().clone(), values)
}

/// Splits a spectrum into per-band time-domain components: component k is
/// the inverse transform of the spectrum restricted to the half-open window
/// [center_k - half_width, center_k + half_width), zero elsewhere.
///
/// Band centers must be spaced at least 2 x half_width apart so no bin falls
/// in two windows; the default carrier/sideband split (centers 0, +-delta
/// with half_width = delta/2) sits exactly at that limit.
pub fn decompose_bands(
    spec: &ComplexSpectrum,
    centers: &[f64],
    half_width: f64,
) -> Result<Vec<ComplexTrace>> {
    if !half_width.is_finite() || half_width <= 0.0 {
        return Err(Error::InvalidArg("half_width must be positive".into()));
    }
    for (i, &a) in centers.iter().enumerate() {
        for &b in &centers[i + 1..] {
            if (a - b).abs() < 2.0 * half_width {
                return Err(Error::OverlappingBands { a, b, half_width });
            }
        }
    }
    let grid = spec.grid();
    centers
        .iter()
        .map(|&c| {
            let bins: Vec<Complex64> = spec
                .bins()
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let f = grid.detuning_at(i);
                    if f >= c - half_width && f < c + half_width {
                        *b
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            Ok(fourier::inverse_transform(&ComplexSpectrum::new(
                grid.clone(),
                bins,
            )?))
        })
        .collect()
}
