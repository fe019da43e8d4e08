//! Uniform sampling grids: a time axis and its induced centered frequency axis.

use crate::error::{Error, Result};

/// Default number of samples for automatically sized grids.
pub const DEFAULT_N_SAMPLES: usize = 16384;

/// Smallest grid the toolkit accepts.
pub const MIN_N_SAMPLES: usize = 64;

/// A uniform time grid plus its induced frequency grid.
///
/// `n_samples` points spaced `dt` seconds starting at `t_start`. The induced
/// frequency axis has resolution `df = 1/(n_samples * dt)` Hz with bins
/// ordered as signed detunings from `-n/2 * df` to `(n/2 - 1) * df`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    n_samples: usize,
    dt: f64,
    t_start: f64,
}

impl SampledGrid {
    pub fn new(n_samples: usize, dt: f64, t_start: f64) -> Result<Self> {
        if n_samples < MIN_N_SAMPLES {
            return Err(Error::InvalidGrid(format!(
                "n_samples = {n_samples}, need at least {MIN_N_SAMPLES}"
            )));
        }
        if !n_samples.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_samples = {n_samples} is not a power of two"
            )));
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidGrid(format!("dt = {dt} must be positive")));
        }
        if !t_start.is_finite() {
            return Err(Error::InvalidGrid("t_start must be finite".into()));
        }
        Ok(Self {
            n_samples,
            dt,
            t_start,
        })
    }

    /// Grid sized for a pulse of half-width `t_half` modulated at `mod_freq`
    /// (0 for an unmodulated pulse), centered on t = 0.
    ///
    /// Picks `dt` so the Nyquist frequency is at least 8x the outermost
    /// spectral content (modulation plus pulse bandwidth) and the pulse is
    /// resolved by at least 16 samples per half-width; grows `n_samples`
    /// beyond the default until the span covers 16 half-widths.
    pub fn auto(t_half: f64, mod_freq: f64) -> Result<Self> {
        Self::auto_with(DEFAULT_N_SAMPLES, t_half, mod_freq)
    }

    pub fn auto_with(n_min: usize, t_half: f64, mod_freq: f64) -> Result<Self> {
        if !t_half.is_finite() || t_half <= 0.0 {
            return Err(Error::InvalidGrid(format!("t_half = {t_half} must be positive")));
        }
        if mod_freq < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "mod_freq = {mod_freq} must be nonnegative"
            )));
        }
        let spectral_fwhm = crate::pulse::spectral_fwhm_from_t_half(t_half);
        let dt_nyquist = 1.0 / (16.0 * (mod_freq + spectral_fwhm));
        let dt_resolve = t_half / 16.0;
        let dt = dt_nyquist.min(dt_resolve);
        let mut n = n_min.max(MIN_N_SAMPLES).next_power_of_two();
        while (n as f64) * dt < 16.0 * t_half {
            n *= 2;
        }
        let t_start = -0.5 * n as f64 * dt;
        Self::new(n, dt, t_start)
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    /// Frequency resolution in Hz.
    pub fn df(&self) -> f64 {
        1.0 / (self.n_samples as f64 * self.dt)
    }

    /// Total time span `n_samples * dt`.
    pub fn span(&self) -> f64 {
        self.n_samples as f64 * self.dt
    }

    /// Nyquist frequency `1/(2 dt)`.
    pub fn nyquist(&self) -> f64 {
        0.5 / self.dt
    }

    /// Time of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt
    }

    /// Signed detuning of centered frequency bin `i`.
    pub fn detuning_at(&self, i: usize) -> f64 {
        (i as f64 - (self.n_samples / 2) as f64) * self.df()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples).map(|i| self.time_at(i)).collect()
    }

    pub fn detunings(&self) -> Vec<f64> {
        (0..self.n_samples).map(|i| self.detuning_at(i)).collect()
    }
}
