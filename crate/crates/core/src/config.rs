//! Experiment configuration: a flat key-value text file with dotted section
//! keys, e.g.
//!
//! ```text
//! pulse.kind = amg
//! pulse.t_half_s = 2.97e-6
//! pulse.mod_freq_hz = 700e3
//! medium.kind = lorentzian
//! medium.gamma_hz = 175e3
//! ```
//!
//! Unknown keys are rejected with the offending line number.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::compensation::DEFAULT_REG_EPS;
use crate::error::{Error, Result};
use crate::grid::DEFAULT_N_SAMPLES;
use crate::medium::{LorentzianEitModel, PhasePolicy};

#[derive(Debug, Clone, PartialEq)]
pub enum PulseKind {
    Gaussian,
    Amg,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseConfig {
    pub kind: PulseKind,
    pub t_half_s: f64,
    pub mod_freq_hz: f64,
    pub center_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MediumConfig {
    Lorentzian(LorentzianEitModel),
    MeasuredFile {
        path: PathBuf,
        phase_policy: PhasePolicy,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub n_samples: usize,
    /// None means size the grid automatically from the pulse parameters.
    pub dt_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionConfig {
    pub centers_hz: Vec<f64>,
    pub half_width_hz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    pub pulse: PulseConfig,
    pub medium: MediumConfig,
    pub reg_eps: f64,
    pub decomposition: Option<DecompositionConfig>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Config {
                line: line_no,
                msg: format!("expected 'key = value', found '{line}'"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if entries.insert(key, (line_no, value)).is_some() {
                return Err(Error::Config {
                    line: line_no,
                    msg: format!("duplicate key '{key}'"),
                });
            }
        }

        const KNOWN: &[&str] = &[
            "grid.n_samples",
            "grid.dt_s",
            "pulse.kind",
            "pulse.t_half_s",
            "pulse.mod_freq_hz",
            "pulse.center_s",
            "pulse.file",
            "medium.kind",
            "medium.gamma_hz",
            "medium.depth",
            "medium.floor",
            "medium.file",
            "medium.phase_policy",
            "compensation.reg_eps",
            "decomposition.centers_hz",
            "decomposition.half_width_hz",
            "output.dir",
        ];
        for (key, (line, _)) in &entries {
            if !KNOWN.contains(key) {
                return Err(Error::Config {
                    line: *line,
                    msg: format!("unknown key '{key}'"),
                });
            }
        }

        let get = |key: &str| entries.get(key).copied();
        let parse_f64 = |key: &str| -> Result<Option<f64>> {
            match get(key) {
                None => Ok(None),
                Some((line, v)) => v.parse::<f64>().map(Some).map_err(|_| Error::Config {
                    line,
                    msg: format!("bad number '{v}' for {key}"),
                }),
            }
        };
        let require = |key: &str| -> Result<(usize, &str)> {
            get(key).ok_or(Error::Config {
                line: 0,
                msg: format!("missing required key '{key}'"),
            })
        };

        // grid
        let n_samples = match get("grid.n_samples") {
            None => DEFAULT_N_SAMPLES,
            Some((line, v)) => {
                let n: usize = v.parse().map_err(|_| Error::Config {
                    line,
                    msg: format!("bad integer '{v}' for grid.n_samples"),
                })?;
                if !n.is_power_of_two() || n < 64 {
                    return Err(Error::Config {
                        line,
                        msg: format!("grid.n_samples = {n} must be a power of two >= 64"),
                    });
                }
                n
            }
        };
        let dt_s = match get("grid.dt_s") {
            None => None,
            Some((_, "auto")) => None,
            Some((line, v)) => {
                let dt: f64 = v.parse().map_err(|_| Error::Config {
                    line,
                    msg: format!("bad number '{v}' for grid.dt_s"),
                })?;
                if !dt.is_finite() || dt <= 0.0 {
                    return Err(Error::Config {
                        line,
                        msg: "grid.dt_s must be positive".into(),
                    });
                }
                Some(dt)
            }
        };

        // pulse
        let (pulse_line, pulse_kind) = require("pulse.kind")?;
        let kind = match pulse_kind {
            "gaussian" => PulseKind::Gaussian,
            "amg" => PulseKind::Amg,
            "file" => {
                let (_, p) = require("pulse.file")?;
                PulseKind::File(PathBuf::from(p))
            }
            other => {
                return Err(Error::Config {
                    line: pulse_line,
                    msg: format!("pulse.kind must be gaussian|amg|file, found '{other}'"),
                })
            }
        };
        let t_half_s = parse_f64("pulse.t_half_s")?.unwrap_or(2.97e-6);
        let mod_freq_hz = parse_f64("pulse.mod_freq_hz")?.unwrap_or(700e3);
        let center_s = parse_f64("pulse.center_s")?.unwrap_or(0.0);
        if kind == PulseKind::Amg && (!mod_freq_hz.is_finite() || mod_freq_hz <= 0.0) {
            return Err(Error::Config {
                line: pulse_line,
                msg: "amg pulse needs pulse.mod_freq_hz > 0".into(),
            });
        }

        // medium
        let medium = match get("medium.kind") {
            None | Some((_, "lorentzian")) => {
                let reference = LorentzianEitModel::reference();
                let gamma = parse_f64("medium.gamma_hz")?.unwrap_or(reference.gamma_hz());
                let depth = parse_f64("medium.depth")?.unwrap_or(reference.depth());
                let floor = parse_f64("medium.floor")?.unwrap_or(reference.floor());
                let model =
                    LorentzianEitModel::new(gamma, depth, floor).map_err(|e| Error::Config {
                        line: get("medium.gamma_hz").map(|(l, _)| l).unwrap_or(0),
                        msg: e.to_string(),
                    })?;
                MediumConfig::Lorentzian(model)
            }
            Some((_, "measured-file")) => {
                let (_, p) = require("medium.file")?;
                let phase_policy = match get("medium.phase_policy") {
                    None | Some((_, "minimum_phase")) => PhasePolicy::MinimumPhase,
                    Some((_, "none")) => PhasePolicy::None,
                    Some((line, other)) => {
                        return Err(Error::Config {
                            line,
                            msg: format!(
                                "medium.phase_policy must be minimum_phase|none, found '{other}'"
                            ),
                        })
                    }
                };
                MediumConfig::MeasuredFile {
                    path: PathBuf::from(p),
                    phase_policy,
                }
            }
            Some((line, other)) => {
                return Err(Error::Config {
                    line,
                    msg: format!("medium.kind must be lorentzian|measured-file, found '{other}'"),
                })
            }
        };

        let reg_eps = parse_f64("compensation.reg_eps")?.unwrap_or(DEFAULT_REG_EPS);
        if reg_eps < 0.0 {
            return Err(Error::Config {
                line: get("compensation.reg_eps").map(|(l, _)| l).unwrap_or(0),
                msg: "compensation.reg_eps must be >= 0".into(),
            });
        }

        // decomposition: defaults to the carrier/sideband split for AMG pulses
        let decomposition = match (get("decomposition.centers_hz"), kind.clone()) {
            (Some((line, v)), _) => {
                let centers: Vec<f64> = v
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Config {
                        line,
                        msg: format!("bad center list '{v}'"),
                    })?;
                let half_width = parse_f64("decomposition.half_width_hz")?.ok_or(Error::Config {
                    line,
                    msg: "decomposition.centers_hz needs decomposition.half_width_hz".into(),
                })?;
                Some(DecompositionConfig {
                    centers_hz: centers,
                    half_width_hz: half_width,
                })
            }
            (None, PulseKind::Amg) => Some(DecompositionConfig {
                centers_hz: vec![-mod_freq_hz, 0.0, mod_freq_hz],
                half_width_hz: mod_freq_hz / 2.0,
            }),
            (None, _) => None,
        };

        let output_dir = get("output.dir").map(|(_, v)| PathBuf::from(v));

        Ok(ExperimentConfig {
            grid: GridConfig { n_samples, dt_s },
            pulse: PulseConfig {
                kind,
                t_half_s,
                mod_freq_hz,
                center_s,
            },
            medium,
            reg_eps,
            decomposition,
            output_dir,
        })
    }
}
