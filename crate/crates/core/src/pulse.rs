//! Gaussian and amplitude-modulated-Gaussian (AMG) pulse synthesis plus
//! their closed-form spectra.
//!
//! The Gaussian intensity profile is I1(t) = exp[-(ln2) t^2 / T0^2], so T0 is
//! the half-width at half maximum of the intensity (time FWHM = 2 T0). The
//! AMG profile is I2(t) = I1(t) [1 + cos(2 pi delta t)]^2, whose field
//! spectrum is a carrier plus two sidebands at +-delta with 1/4 of the
//! carrier's spectral intensity.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::grid::SampledGrid;
use crate::trace::IntensityTrace;

/// Fraction of pulse energy allowed to fall outside the grid.
const TRUNCATION_TOL: f64 = 1e-6;

/// Unmodulated Gaussian pulse: intensity half-width `t_half` (T0), centered
/// at `t_center`, peak intensity normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    t_half: f64,
    t_center: f64,
}

impl GaussianSpec {
    pub fn new(t_half: f64, t_center: f64) -> Result<Self> {
        if !t_half.is_finite() || t_half <= 0.0 {
            return Err(Error::InvalidArg(format!("t_half = {t_half} must be positive")));
        }
        if !t_center.is_finite() {
            return Err(Error::InvalidArg("t_center must be finite".into()));
        }
        Ok(Self { t_half, t_center })
    }

    pub fn t_half(&self) -> f64 {
        self.t_half
    }

    pub fn t_center(&self) -> f64 {
        self.t_center
    }
}

/// Amplitude-modulated Gaussian: base envelope plus modulation frequency
/// `mod_freq` (delta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmgSpec {
    base: GaussianSpec,
    mod_freq: f64,
}

impl AmgSpec {
    pub fn new(base: GaussianSpec, mod_freq: f64) -> Result<Self> {
        if !mod_freq.is_finite() || mod_freq <= 0.0 {
            return Err(Error::InvalidArg(format!(
                "mod_freq = {mod_freq} must be positive"
            )));
        }
        Ok(Self { base, mod_freq })
    }

    pub fn base(&self) -> &GaussianSpec {
        &self.base
    }

    pub fn mod_freq(&self) -> f64 {
        self.mod_freq
    }
}

/// Closed-form intensity-spectrum shape: I1(f) = exp[-(ln2) f^2 / Omega0^2]
/// with `half_width` = Omega0, plus sidebands at `mod_freq` when nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralShape {
    half_width: f64,
    mod_freq: f64,
}

impl SpectralShape {
    pub fn new(half_width: f64, mod_freq: f64) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::InvalidArg(format!(
                "half_width = {half_width} must be positive"
            )));
        }
        if mod_freq < 0.0 {
            return Err(Error::InvalidArg("mod_freq must be nonnegative".into()));
        }
        Ok(Self {
            half_width,
            mod_freq,
        })
    }

    /// Shape matching the pulse a [`GaussianSpec`] or [`AmgSpec`] generates.
    pub fn for_pulse(t_half: f64, mod_freq: f64) -> Result<Self> {
        Self::new(spectral_half_width_from_t_half(t_half), mod_freq)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn mod_freq(&self) -> f64 {
        self.mod_freq
    }
}

/// Spectral half-width Omega0 = ln2 / (2 pi T0) of the Gaussian intensity
/// spectrum (its FWHM is 2 Omega0).
pub fn spectral_half_width_from_t_half(t_half: f64) -> f64 {
    LN_2 / (2.0 * PI * t_half)
}

/// Intensity-spectrum FWHM of a Gaussian pulse with half-width `t_half`.
pub fn spectral_fwhm_from_t_half(t_half: f64) -> f64 {
    2.0 * spectral_half_width_from_t_half(t_half)
}

/// Inverts the time-bandwidth relation: T0 whose intensity spectrum has the
/// given FWHM.
pub fn t_half_from_spectral_fwhm(fwhm_hz: f64) -> f64 {
    assert!(fwhm_hz > 0.0, "spectral FWHM must be positive");
    LN_2 / (PI * fwhm_hz)
}

// Complementary error function, |relative error| < 1.2e-7 everywhere
// (rational Chebyshev approximation).
fn erfcc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t * (-z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587
                                    + t * (-0.82215223 + t * 0.17087277)))))))))
        .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

/// Fraction of the Gaussian-envelope energy outside [t_start, t_end].
fn truncated_fraction(spec: &GaussianSpec, grid: &SampledGrid) -> f64 {
    let c = spec.t_center();
    let left = grid.t_start();
    let right = grid.t_start() + grid.span();
    let scale = LN_2.sqrt() / spec.t_half();
    // distance arguments are signed: a center outside the grid yields
    // erfc of a negative argument, i.e. a fraction approaching 1
    0.5 * (erfcc((c - left) * scale) + erfcc((right - c) * scale))
}

/// Generates the Gaussian intensity pulse on the grid.
pub fn gen_gaussian(spec: &GaussianSpec, grid: &SampledGrid) -> Result<IntensityTrace> {
    let frac = truncated_fraction(spec, grid);
    if frac > TRUNCATION_TOL {
        return Err(Error::Truncated { fraction: frac });
    }
    let samples = (0..grid.n_samples())
        .map(|i| {
            let t = grid.time_at(i) - spec.t_center();
            (-LN_2 * t * t / (spec.t_half() * spec.t_half())).exp()
        })
        .collect();
    IntensityTrace::new(grid.clone(), samples)
}

/// Generates the AMG intensity pulse on the grid.
pub fn gen_amg(spec: &AmgSpec, grid: &SampledGrid) -> Result<IntensityTrace> {
    let required = 8.0 * spec.mod_freq();
    let actual = 1.0 / grid.dt();
    if actual < required {
        return Err(Error::Undersampled { required, actual });
    }
    let frac = truncated_fraction(spec.base(), grid);
    if frac > TRUNCATION_TOL {
        return Err(Error::Truncated { fraction: frac });
    }
    let t0 = spec.base().t_half();
    let c = spec.base().t_center();
    let samples = (0..grid.n_samples())
        .map(|i| {
            let t = grid.time_at(i) - c;
            let envelope = (-LN_2 * t * t / (t0 * t0)).exp();
            let m = 1.0 + (2.0 * PI * spec.mod_freq() * t).cos();
            envelope * m * m
        })
        .collect();
    IntensityTrace::new(grid.clone(), samples)
}

/// Closed-form intensity spectrum at a detuning:
/// I1(f) for an unmodulated shape, I2(f) = I1(f) + [I1(f-d) + I1(f+d)]/4
/// for a modulated one.
pub fn analytic_spectrum(shape: &SpectralShape, detuning_hz: f64) -> f64 {
    let w = shape.half_width();
    let g = |f: f64| (-LN_2 * f * f / (w * w)).exp();
    if shape.mod_freq() == 0.0 {
        g(detuning_hz)
    } else {
        let d = shape.mod_freq();
        g(detuning_hz) + 0.25 * (g(detuning_hz - d) + g(detuning_hz + d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier;
    use crate::metrics;

    const T0: f64 = 2.97e-6;
    const DELTA: f64 = 700e3;

    fn numeric_spectral_fwhm(t_half: f64) -> f64 {
        let grid = SampledGrid::auto(t_half, 0.0).unwrap();
        let spec = GaussianSpec::new(t_half, 0.0).unwrap();
        let pulse = gen_gaussian(&spec, &grid).unwrap();
        let spectrum = fourier::forward_amplitude(&pulse.to_amplitude()).intensity_spectrum();
        metrics::fwhm(&grid.detunings(), spectrum.values()).unwrap()
    }

    #[test]
    fn gaussian_peak_and_half_width() {
        let grid = SampledGrid::auto(T0, 0.0).unwrap();
        let spec = GaussianSpec::new(T0, 0.0).unwrap();
        let pulse = gen_gaussian(&spec, &grid).unwrap();
        let n = grid.n_samples();
        // t = t_center -> I = 1
        assert!((pulse.samples()[n / 2] - 1.0).abs() < 1e-12);
        // symmetric about the center
        assert!((pulse.samples()[n / 2 - 100] - pulse.samples()[n / 2 + 100]).abs() < 1e-12);
        // I(t_center + T0) = 0.5 (evaluate off-grid via the formula's own
        // sampled neighbors: T0/dt is exactly 16 on the auto grid)
        let steps = (T0 / grid.dt()).round() as usize;
        assert!((T0 / grid.dt() - steps as f64).abs() < 1e-9);
        assert!((pulse.samples()[n / 2 + steps] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gaussian_spectrum_fwhm_matches_reported_bandwidth() {
        let fwhm = numeric_spectral_fwhm(T0);
        assert!(
            (fwhm - 74.4e3).abs() / 74.4e3 < 0.01,
            "FWHM {fwhm:.1} Hz not within 1% of 74.4 kHz"
        );
    }

    #[test]
    fn amg_peak_zeros_and_envelope() {
        let grid = SampledGrid::auto(T0, DELTA).unwrap();
        let spec = AmgSpec::new(GaussianSpec::new(T0, 0.0).unwrap(), DELTA).unwrap();
        let pulse = gen_amg(&spec, &grid).unwrap();
        let n = grid.n_samples();
        // (1 + cos 0)^2 = 4 at the center
        assert!((pulse.samples()[n / 2] - 4.0).abs() < 1e-12);
        // zero at t = 1/(2 delta), i.e. 0.714 us for delta = 700 kHz
        let t_zero = 1.0 / (2.0 * DELTA);
        let i_zero = ((t_zero - grid.t_start()) / grid.dt()).round() as usize;
        let lo = pulse.samples()[i_zero - 1..=i_zero + 1]
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(lo < 2e-4, "expected a null near 0.714 us, min {lo:e}");
        // bounded by 4x the Gaussian envelope
        let gauss = gen_gaussian(spec.base(), &grid).unwrap();
        for (a, g) in pulse.samples().iter().zip(gauss.samples()) {
            assert!(*a <= 4.0 * g + 1e-12);
            assert!(*a >= 0.0);
        }
    }

    #[test]
    fn amg_sideband_structure() {
        let grid = SampledGrid::auto(T0, DELTA).unwrap();
        let spec = AmgSpec::new(GaussianSpec::new(T0, 0.0).unwrap(), DELTA).unwrap();
        let pulse = gen_amg(&spec, &grid).unwrap();
        let spectrum = fourier::forward_amplitude(&pulse.to_amplitude()).intensity_spectrum();
        let nu = grid.detunings();
        let peak_near = |center: f64| {
            spectrum
                .values()
                .iter()
                .zip(&nu)
                .filter(|(_, &f)| (f - center).abs() < 100e3)
                .map(|(&v, &f)| (v, f))
                .fold((0.0, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc })
        };
        let (carrier, f0) = peak_near(0.0);
        let (plus, fp) = peak_near(DELTA);
        let (minus, fm) = peak_near(-DELTA);
        assert!(f0.abs() <= grid.df());
        assert!((fp - DELTA).abs() <= grid.df());
        assert!((fm + DELTA).abs() <= grid.df());
        assert!((plus / carrier - 0.25).abs() < 0.02 * 0.25, "ratio {}", plus / carrier);
        assert!((minus / carrier - 0.25).abs() < 0.02 * 0.25);
    }

    #[test]
    fn numeric_spectrum_matches_analytic_shape() {
        // pointwise within 2% of carrier peak wherever the analytic value
        // exceeds 1e-4, for delta/Omega0 >= 10
        let t_half = 2.97e-6;
        let mod_freq = 400e3; // delta/Omega0 ~ 10.8
        let shape = SpectralShape::for_pulse(t_half, mod_freq).unwrap();
        assert!(mod_freq / shape.half_width() >= 10.0);
        let grid = SampledGrid::auto(t_half, mod_freq).unwrap();
        let spec = AmgSpec::new(GaussianSpec::new(t_half, 0.0).unwrap(), mod_freq).unwrap();
        let pulse = gen_amg(&spec, &grid).unwrap();
        let spectrum = fourier::forward_amplitude(&pulse.to_amplitude()).intensity_spectrum();
        // normalize the numeric spectrum so its carrier peak is 1
        let peak = spectrum.values().iter().cloned().fold(0.0, f64::max);
        for (i, &v) in spectrum.values().iter().enumerate() {
            let f = grid.detuning_at(i);
            let expected = analytic_spectrum(&shape, f);
            if expected > 1e-4 {
                assert!(
                    (v / peak - expected).abs() < 0.02,
                    "at {f:.0} Hz: numeric {} vs analytic {expected}",
                    v / peak
                );
            }
        }
        // cross-term bound: spectrum at delta/2 below 1e-3 of carrier
        let i_half = ((mod_freq / 2.0) / grid.df()).round() as usize + grid.n_samples() / 2;
        assert!(spectrum.values()[i_half] / peak < 1e-3);
    }

    #[test]
    fn analytic_spectrum_values() {
        let shape = SpectralShape::new(37e3, 0.0).unwrap();
        assert!((analytic_spectrum(&shape, 0.0) - 1.0).abs() < 1e-12);
        assert!((analytic_spectrum(&shape, 37e3) - 0.5).abs() < 1e-12);
        // sidebands carry 1/4 of the carrier when well separated
        let amg = SpectralShape::new(37e3, 700e3).unwrap();
        assert!((analytic_spectrum(&amg, 700e3) - 0.25).abs() < 1e-6);
        assert!((analytic_spectrum(&amg, -700e3) - 0.25).abs() < 1e-6);
    }

    #[test]
    fn t_half_inverts_spectral_fwhm() {
        // closed-form inverse relation
        let f = 2.0 * LN_2 / (2.0 * PI * 1.0);
        assert!((t_half_from_spectral_fwhm(f) - 1.0).abs() < 1e-12);
        assert!((t_half_from_spectral_fwhm(74.4e3) - 2.97e-6).abs() / 2.97e-6 < 2e-3);
        // numeric round trip at several bandwidths
        for fwhm in [10e3, 74.4e3, 300e3] {
            let t_half = t_half_from_spectral_fwhm(fwhm);
            let measured = numeric_spectral_fwhm(t_half);
            assert!(
                (measured - fwhm).abs() / fwhm < 0.01,
                "fwhm {fwhm:e}: measured {measured:e}"
            );
        }
    }

    #[test]
    fn truncation_and_aliasing_are_rejected() {
        // grid far too short for the pulse
        let grid = SampledGrid::new(64, 1e-7, -3.2e-6).unwrap();
        let spec = GaussianSpec::new(10e-6, 0.0).unwrap();
        assert!(matches!(
            gen_gaussian(&spec, &grid),
            Err(Error::Truncated { .. })
        ));
        // center far outside the grid
        let grid2 = SampledGrid::auto(T0, 0.0).unwrap();
        let off = GaussianSpec::new(T0, grid2.span()).unwrap();
        assert!(gen_gaussian(&off, &grid2).is_err());
        // modulation above the sample-rate budget
        let coarse = SampledGrid::new(16384, 1e-6, -8e-3).unwrap();
        let amg = AmgSpec::new(GaussianSpec::new(100e-6, 0.0).unwrap(), 700e3).unwrap();
        assert!(matches!(
            gen_amg(&amg, &coarse),
            Err(Error::Undersampled { .. })
        ));
    }

    #[test]
    fn amg_center_sample_is_four_times_gaussian() {
        // the modulation factor at the carrier sample is (1+cos 0)^2 = 4
        // independent of delta, the delta -> 0 limit included
        let base = GaussianSpec::new(T0, 0.0).unwrap();
        for delta in [1e3, 10e3, DELTA] {
            let grid = SampledGrid::auto(T0, delta).unwrap();
            let amg = gen_amg(&AmgSpec::new(base, delta).unwrap(), &grid).unwrap();
            let gauss = gen_gaussian(&base, &grid).unwrap();
            let n = grid.n_samples();
            assert!((amg.samples()[n / 2] - 4.0 * gauss.samples()[n / 2]).abs() < 1e-12);
        }
    }
}
