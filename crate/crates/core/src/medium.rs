//! The medium as a complex linear transfer function H(f) = A(f) e^{i Phi(f)}:
//! either a parametric Lorentzian transparency-window model or a measured
//! intensity-transmission table with a chosen phase policy.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::SampledGrid;
use crate::interp::{linear_interp, MonotoneCubic};

/// Transmission values below this floor are clamped before taking logs in
/// the Kramers-Kronig step, keeping the log-magnitude bounded.
pub const KK_TRANSMISSION_FLOOR: f64 = 1e-4;

/// Parametric transparency-window model.
///
/// Amplitude and phase response:
///
/// ```text
/// A(f)   = exp[ -b0/2 - (D/2) f^2 / (g^2 + f^2) ]
/// Phi(f) = (D/2) g f / (g^2 + f^2)
/// ```
///
/// where `g` = `gamma_hz` is the window half-width, `D` = `depth` the
/// off-window optical-depth contrast and `b0` = `floor` the residual
/// on-resonance absorption exponent. The ratios are unit-invariant, so the
/// formulas hold with f and g both in Hz; angular factors enter only through
/// derivatives (group delay).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianEitModel {
    gamma_hz: f64,
    depth: f64,
    floor: f64,
}

impl LorentzianEitModel {
    pub fn new(gamma_hz: f64, depth: f64, floor: f64) -> Result<Self> {
        if !gamma_hz.is_finite() || gamma_hz <= 0.0 {
            return Err(Error::InvalidArg(format!("gamma = {gamma_hz} must be positive")));
        }
        if depth < 0.0 || !depth.is_finite() {
            return Err(Error::InvalidArg(format!("depth = {depth} must be >= 0")));
        }
        if floor < 0.0 || !floor.is_finite() {
            return Err(Error::InvalidArg(format!("floor = {floor} must be >= 0")));
        }
        Ok(Self {
            gamma_hz,
            depth,
            floor,
        })
    }

    /// Reference model: 350 kHz intensity FWHM (gamma = 175 kHz, depth =
    /// 2 ln 2 puts the half-max exactly at f = gamma) and 61.5% peak
    /// transmission.
    pub fn reference() -> Self {
        Self {
            gamma_hz: 175e3,
            depth: 2.0 * LN_2,
            floor: -(0.615_f64.ln()),
        }
    }

    pub fn gamma_hz(&self) -> f64 {
        self.gamma_hz
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Amplitude transmission A(f).
    pub fn amplitude(&self, detuning_hz: f64) -> f64 {
        let f2 = detuning_hz * detuning_hz;
        let g2 = self.gamma_hz * self.gamma_hz;
        (-0.5 * self.floor - 0.5 * self.depth * f2 / (g2 + f2)).exp()
    }

    /// Phase response Phi(f), odd in f.
    pub fn phase(&self, detuning_hz: f64) -> f64 {
        let g2 = self.gamma_hz * self.gamma_hz;
        0.5 * self.depth * self.gamma_hz * detuning_hz / (g2 + detuning_hz * detuning_hz)
    }

    /// Intensity transmission |A(f)|^2, the directly measured quantity.
    pub fn transmission(&self, detuning_hz: f64) -> f64 {
        let a = self.amplitude(detuning_hz);
        a * a
    }
}

/// Measured intensity-transmission table: (detuning Hz, transmission in
/// [0, 1]) pairs with strictly increasing detunings.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredSpectrum {
    points: Vec<(f64, f64)>,
}

impl MeasuredSpectrum {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 8 {
            return Err(Error::InvalidSpectrum(format!(
                "need at least 8 points, got {}",
                points.len()
            )));
        }
        for w in points.windows(2) {
            if !w[1].0.is_finite() || w[1].0 <= w[0].0 {
                return Err(Error::InvalidSpectrum(format!(
                    "detunings must be strictly increasing ({:e} then {:e})",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(f, t) in &points {
            if !f.is_finite() {
                return Err(Error::InvalidSpectrum(format!("non-finite detuning {f}")));
            }
            if !t.is_finite() || !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidSpectrum(format!(
                    "transmission {t} at {f:e} Hz outside [0, 1]"
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn detuning_min(&self) -> f64 {
        self.points[0].0
    }

    pub fn detuning_max(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }
}

/// How to obtain a phase response from a measured magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasePolicy {
    /// Magnitude only; phase-dependent operations are unavailable.
    None,
    /// Minimum-phase partner of the magnitude via the Hilbert transform of
    /// ln A.
    MinimumPhase,
}

/// Behavior outside the tabulated detuning range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WingPolicy {
    /// Hold the edge value (default): compensation divides by |A|^2 and an
    /// invented wing decay would amplify without bound.
    #[default]
    HoldEdge,
    /// Error out when evaluated beyond the table.
    Strict,
}

#[derive(Debug, Clone)]
enum Source {
    Model(LorentzianEitModel),
    Measured {
        data: MeasuredSpectrum,
        interp: MonotoneCubic,
        phase_policy: PhasePolicy,
        wing_policy: WingPolicy,
        /// Minimum phase materialized on an internal grid so the transfer
        /// function stays evaluable at any detuning.
        kk: Option<(Vec<f64>, Vec<f64>)>, // (detunings, phase)
    },
}

/// The medium: evaluable complex response H(f) = A(f) e^{i Phi(f)}.
#[derive(Debug, Clone)]
pub struct TransferFunction {
    source: Source,
}

impl TransferFunction {
    pub fn from_model(model: LorentzianEitModel) -> Self {
        Self {
            source: Source::Model(model),
        }
    }

    /// Builds a transfer function from a measured transmission table.
    /// A(f) = sqrt(interpolated transmission); phase per policy; wings hold
    /// the edge value unless [`TransferFunction::with_wing_policy`] says
    /// otherwise.
    pub fn from_measured(data: MeasuredSpectrum, phase_policy: PhasePolicy) -> Result<Self> {
        let xs: Vec<f64> = data.points().iter().map(|p| p.0).collect();
        let ys: Vec<f64> = data.points().iter().map(|p| p.1).collect();
        let interp = MonotoneCubic::new(xs, ys);
        let kk = match phase_policy {
            PhasePolicy::None => None,
            PhasePolicy::MinimumPhase => {
                let grid = kk_grid(&data)?;
                let phase = kk_min_phase_for(&data, &interp, &grid)?;
                Some((grid.detunings(), phase))
            }
        };
        Ok(Self {
            source: Source::Measured {
                data,
                interp,
                phase_policy,
                wing_policy: WingPolicy::default(),
                kk,
            },
        })
    }

    pub fn with_wing_policy(mut self, policy: WingPolicy) -> Self {
        if let Source::Measured { wing_policy, .. } = &mut self.source {
            *wing_policy = policy;
        }
        self
    }

    pub fn phase_available(&self) -> bool {
        match &self.source {
            Source::Model(_) => true,
            Source::Measured { phase_policy, .. } => *phase_policy == PhasePolicy::MinimumPhase,
        }
    }

    /// Amplitude transmission A(f) >= 0.
    pub fn amplitude_at(&self, detuning_hz: f64) -> Result<f64> {
        match &self.source {
            Source::Model(m) => Ok(m.amplitude(detuning_hz)),
            Source::Measured {
                data,
                interp,
                wing_policy,
                ..
            } => {
                let outside =
                    detuning_hz < data.detuning_min() || detuning_hz > data.detuning_max();
                if outside && *wing_policy == WingPolicy::Strict {
                    return Err(Error::OutOfRange {
                        delta_hz: detuning_hz,
                        min_hz: data.detuning_min(),
                        max_hz: data.detuning_max(),
                    });
                }
                let t = interp.eval(detuning_hz).clamp(0.0, 1.0);
                Ok(t.sqrt())
            }
        }
    }

    /// Phase response Phi(f) in radians.
    pub fn phase_at(&self, detuning_hz: f64) -> Result<f64> {
        match &self.source {
            Source::Model(m) => Ok(m.phase(detuning_hz)),
            Source::Measured { kk: Some((xs, ph)), .. } => Ok(linear_interp(xs, ph, detuning_hz)),
            Source::Measured { .. } => Err(Error::PhaseUnavailable),
        }
    }

    /// Complex response H(f). For a magnitude-only measured source the
    /// phase is taken as zero.
    pub fn eval(&self, detuning_hz: f64) -> Result<Complex64> {
        let a = self.amplitude_at(detuning_hz)?;
        let phi = match self.phase_at(detuning_hz) {
            Ok(p) => p,
            Err(Error::PhaseUnavailable) => 0.0,
            Err(e) => return Err(e),
        };
        Ok(Complex64::from_polar(a, phi))
    }

    /// Group delay dPhi/domega at `detuning_hz`, by central finite difference
    /// with the given frequency step. Positive means delay (slow light),
    /// negative advance (fast light).
    pub fn group_delay(&self, detuning_hz: f64, step_hz: f64) -> Result<f64> {
        if !self.phase_available() {
            return Err(Error::PhaseUnavailable);
        }
        if !step_hz.is_finite() || step_hz <= 0.0 {
            return Err(Error::InvalidArg("group delay step must be positive".into()));
        }
        let hi = self.phase_at(detuning_hz + step_hz)?;
        let lo = self.phase_at(detuning_hz - step_hz)?;
        Ok((hi - lo) / (2.0 * 2.0 * PI * step_hz))
    }

    /// Samples the complex response over the grid's detuning axis.
    pub fn sample(&self, grid: &SampledGrid) -> Result<Vec<Complex64>> {
        (0..grid.n_samples())
            .map(|i| self.eval(grid.detuning_at(i)))
            .collect()
    }

    /// Samples only the amplitude response over the grid's detuning axis.
    pub fn sample_amplitude(&self, grid: &SampledGrid) -> Result<Vec<f64>> {
        (0..grid.n_samples())
            .map(|i| self.amplitude_at(grid.detuning_at(i)))
            .collect()
    }
}

/// Minimum-phase partner of a measured magnitude, sampled on the grid's
/// detuning axis.
///
/// The phase is the discrete Hilbert transform of ln A(f) (A = sqrt of the
/// floored transmission), computed with the cepstral fold under the crate's
/// transform conventions: fold the even log-magnitude cepstrum onto causal
/// indices and read the imaginary part of the rebuilt log-spectrum.
pub fn kk_min_phase(data: &MeasuredSpectrum, grid: &SampledGrid) -> Result<Vec<f64>> {
    let xs: Vec<f64> = data.points().iter().map(|p| p.0).collect();
    let ys: Vec<f64> = data.points().iter().map(|p| p.1).collect();
    let interp = MonotoneCubic::new(xs, ys);
    kk_min_phase_for(data, &interp, grid)
}

fn kk_min_phase_for(
    data: &MeasuredSpectrum,
    interp: &MonotoneCubic,
    grid: &SampledGrid,
) -> Result<Vec<f64>> {
    if data.points().iter().all(|&(_, t)| t == 0.0) {
        return Err(Error::Degenerate("all transmissions are zero".into()));
    }
    let n = grid.n_samples();
    // ln A on the centered axis, floored and wing-extended
    let mut log_mag: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = interp
                .eval(grid.detuning_at(i))
                .clamp(KK_TRANSMISSION_FLOOR, 1.0);
            Complex64::new(0.5 * t.ln(), 0.0)
        })
        .collect();
    // to DFT bin order, then cepstrum c = synthesis{ln A}
    log_mag.rotate_left(n / 2);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut log_mag);
    let inv_n = 1.0 / n as f64;
    for c in log_mag.iter_mut() {
        *c *= inv_n;
    }
    // fold the even cepstrum onto causal indices
    for c in log_mag.iter_mut().take(n / 2).skip(1) {
        *c *= 2.0;
    }
    for c in log_mag.iter_mut().skip(n / 2 + 1) {
        *c = Complex64::new(0.0, 0.0);
    }
    // rebuild the log-spectrum; its imaginary part is the minimum phase
    planner.plan_fft_inverse(n).process(&mut log_mag);
    log_mag.rotate_left(n / 2);
    Ok(log_mag.into_iter().map(|c| c.im).collect())
}

/// Internal frequency grid for Kramers-Kronig evaluation of a measured
/// table: symmetric, spanning four times the tabulated extent so wing
/// truncation of the Hilbert kernel stays negligible.
pub fn kk_grid(data: &MeasuredSpectrum) -> Result<SampledGrid> {
    let extent = data
        .detuning_max()
        .abs()
        .max(data.detuning_min().abs())
        .max(1.0);
    let n = 8192usize;
    let full_span = 8.0 * extent; // +-4x extent
    let dt = 1.0 / full_span;
    SampledGrid::new(n, dt, -0.5 * n as f64 * dt)
}
