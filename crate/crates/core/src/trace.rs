//! Time-domain traces and frequency-domain spectra on a shared grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SampledGrid;

/// Relative threshold below which negative intensity samples are clamped to
/// zero instead of rejected (scope/rounding noise tolerance).
pub const NEGATIVE_CLAMP: f64 = 1e-12;

fn check_len(grid: &SampledGrid, len: usize) -> Result<()> {
    if len != grid.n_samples() {
        return Err(Error::LengthMismatch {
            expected: grid.n_samples(),
            got: len,
        });
    }
    Ok(())
}

/// Real optical intensity I(t) >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityTrace {
    grid: SampledGrid,
    samples: Vec<f64>,
}

impl IntensityTrace {
    /// Builds a trace, clamping negative samples above `-1e-12 * peak` to
    /// zero and rejecting anything more negative.
    pub fn new(grid: SampledGrid, mut samples: Vec<f64>) -> Result<Self> {
        check_len(&grid, samples.len())?;
        let peak = samples.iter().cloned().fold(0.0_f64, f64::max);
        let threshold = NEGATIVE_CLAMP * peak;
        for (i, s) in samples.iter_mut().enumerate() {
            if *s < 0.0 {
                if *s < -threshold {
                    return Err(Error::NegativeIntensity { index: i, value: *s });
                }
                *s = 0.0;
            }
        }
        Ok(Self { grid, samples })
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Pulse energy, `sum I * dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.grid.dt()
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Field amplitude E(t) = sqrt(I(t)).
    pub fn to_amplitude(&self) -> AmplitudeTrace {
        AmplitudeTrace {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|&s| s.sqrt()).collect(),
        }
    }
}

/// Real, nonnegative field amplitude E(t).
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    grid: SampledGrid,
    samples: Vec<f64>,
}

impl AmplitudeTrace {
    pub fn new(grid: SampledGrid, samples: Vec<f64>) -> Result<Self> {
        check_len(&grid, samples.len())?;
        if let Some((i, &v)) = samples.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(Error::NegativeIntensity { index: i, value: v });
        }
        Ok(Self { grid, samples })
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn to_complex(&self) -> ComplexTrace {
        ComplexTrace {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect(),
        }
    }

    /// Intensity I(t) = E(t)^2.
    pub fn intensity(&self) -> IntensityTrace {
        IntensityTrace {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|&s| s * s).collect(),
        }
    }
}

/// Complex field values in the time domain (post-propagation fields acquire
/// phase).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTrace {
    grid: SampledGrid,
    samples: Vec<Complex64>,
}

impl ComplexTrace {
    pub fn new(grid: SampledGrid, samples: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, samples.len())?;
        Ok(Self { grid, samples })
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Intensity I(t) = |E(t)|^2.
    pub fn intensity(&self) -> IntensityTrace {
        IntensityTrace {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|s| s.norm_sqr()).collect(),
        }
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.grid.dt()
    }
}

/// Frequency-domain field on the grid's centered detuning axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    grid: SampledGrid,
    bins: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn new(grid: SampledGrid, bins: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, bins.len())?;
        Ok(Self { grid, bins })
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    /// Intensity spectrum |E(detuning)|^2.
    pub fn intensity_spectrum(&self) -> RealSpectrum {
        RealSpectrum {
            grid: self.grid.clone(),
            values: self.bins.iter().map(|b| b.norm_sqr()).collect(),
        }
    }

    /// Same normalization as the time-domain energy (the transform is
    /// unitary), so passivity comparisons are convention-free.
    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|b| b.norm_sqr()).sum::<f64>() * self.grid.dt()
    }
}

/// Real-valued spectrum on the centered detuning axis (intensity spectral
/// density or transmission, depending on role).
#[derive(Debug, Clone, PartialEq)]
pub struct RealSpectrum {
    grid: SampledGrid,
    values: Vec<f64>,
}

impl RealSpectrum {
    pub fn new(grid: SampledGrid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &SampledGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}
