//! Slow-light propagation and reshaping toolkit for amplitude-modulated
//! pulses in an electromagnetically-induced-transparency (EIT) medium.
//!
//! The medium is modeled as a complex linear transfer function
//! H(f) = A(f) e^{i Phi(f)} — a parametric Lorentzian transparency window or
//! a measured transmission table with an optional Kramers-Kronig
//! minimum-phase reconstruction. Pulses propagate in the frequency domain;
//! absorption-induced distortion is undone by Wiener-regularized spectral
//! compensation, and carrier/sideband decomposition exposes simultaneous
//! slow and fast light.

pub mod compensation;
pub mod config;
pub mod error;
pub mod fit;
pub mod fourier;
pub mod grid;
mod interp;
pub mod io;
pub mod medium;
pub mod metrics;
pub mod plot;
pub mod propagation;
pub mod pulse;
pub mod runner;
pub mod trace;

pub use error::{Error, Result};
pub use grid::SampledGrid;
pub use medium::{
    kk_min_phase, LorentzianEitModel, MeasuredSpectrum, PhasePolicy, TransferFunction, WingPolicy,
};
pub use metrics::{AnalysisReport, DelayMethod};
pub use pulse::{AmgSpec, GaussianSpec, SpectralShape};
pub use trace::{AmplitudeTrace, ComplexSpectrum, ComplexTrace, IntensityTrace, RealSpectrum};
