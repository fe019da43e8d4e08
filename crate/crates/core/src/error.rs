//! Error type shared across the toolkit.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid invariant violated: {0}")]
    InvalidGrid(String),

    #[error("sample length {got} does not match grid length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("negative intensity {value:.3e} at sample {index}")]
    NegativeIntensity { index: usize, value: f64 },

    #[error("pulse truncated by grid: fraction {fraction:.3e} of its energy falls outside")]
    Truncated { fraction: f64 },

    #[error("modulation undersampled: need sample rate >= {required:.3e} Hz, grid has {actual:.3e} Hz")]
    Undersampled { required: f64, actual: f64 },

    #[error("detuning {delta_hz:.3e} Hz outside tabulated range [{min_hz:.3e}, {max_hz:.3e}] Hz")]
    OutOfRange {
        delta_hz: f64,
        min_hz: f64,
        max_hz: f64,
    },

    #[error("phase unavailable: transfer function was built without a phase policy")]
    PhaseUnavailable,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("spectral bands overlap: |{a:.3e} - {b:.3e}| < 2 x {half_width:.3e} Hz")]
    OverlappingBands { a: f64, b: f64, half_width: f64 },

    #[error("division blowup: zero transmission on bins carrying {fraction:.3e} of output energy")]
    DivisionBlowup { fraction: f64 },

    #[error("half-maximum level crossed {n} times, expected 2", n = crossings.len())]
    AmbiguousWidth { crossings: Vec<f64> },

    #[error("invalid measured spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("fit unidentifiable: {0}")]
    Unidentifiable(String),

    #[error("invalid argument: {0}")]
    InvalidArg(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("guard band violated: fraction {fraction:.3e} of pulse energy outside the central half of the grid")]
    GuardBand { fraction: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit class: 2 for config/format/schema problems, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidGrid(_)
            | Error::LengthMismatch { .. }
            | Error::NegativeIntensity { .. }
            | Error::InvalidSpectrum(_)
            | Error::InvalidArg(_)
            | Error::Parse { .. }
            | Error::Config { .. }
            | Error::Io(_) => 2,
            _ => 3,
        }
    }

    /// Short machine-parsable category used in CLI error lines.
    pub fn class(&self) -> &'static str {
        if self.exit_code() == 2 {
            "format"
        } else {
            "numeric"
        }
    }
}
