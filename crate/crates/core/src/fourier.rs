//! Unitary time <-> frequency transforms on the centered detuning axis.
//!
//! The analysis transform uses the e^{+i 2 pi f t} kernel so that a transfer
//! function with positive phase slope dPhi/domega delays the pulse; this is
//! the convention under which group delay is positive for slow light. Both
//! directions carry 1/sqrt(N) so energy is preserved exactly (Parseval holds
//! bin-for-sample).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::trace::{AmplitudeTrace, ComplexSpectrum, ComplexTrace};

/// Rotate between DFT bin order (DC first) and centered order (most negative
/// detuning first). For power-of-two lengths the shift is its own inverse.
fn rotate_half(buf: &mut [Complex64]) {
    let n = buf.len();
    buf.rotate_left(n / 2);
}

/// Forward (analysis) transform of a complex trace.
pub fn forward_transform(trace: &ComplexTrace) -> ComplexSpectrum {
    let n = trace.grid().n_samples();
    let mut buf = trace.samples().to_vec();
    // rustfft's inverse plan applies the e^{+i} kernel, unnormalized
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for b in buf.iter_mut() {
        *b *= scale;
    }
    rotate_half(&mut buf);
    ComplexSpectrum::new(trace.grid().clone(), buf).expect("length preserved")
}

/// Forward transform of a real amplitude trace.
pub fn forward_amplitude(trace: &AmplitudeTrace) -> ComplexSpectrum {
    forward_transform(&trace.to_complex())
}

/// Inverse (synthesis) transform; exact inverse of [`forward_transform`].
pub fn inverse_transform(spec: &ComplexSpectrum) -> ComplexTrace {
    let n = spec.grid().n_samples();
    let mut buf = spec.bins().to_vec();
    rotate_half(&mut buf);
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for b in buf.iter_mut() {
        *b *= scale;
    }
    ComplexTrace::new(spec.grid().clone(), buf).expect("length preserved")
}
