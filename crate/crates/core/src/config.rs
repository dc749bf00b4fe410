//! TOML run configuration and its resolution into simulation inputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{MediumParams, SimWindow};
use crate::ensemble::{GridSpec, DEFAULT_SPAN, SWEEP_CLASSES};
use crate::error::{Error, Result};
use crate::pulse::{
    area_to_amplitude, default_window, flat_top_for_area, pi_units, AreaConvention, DPulse, DoubleGaussianDPulse,
    EmPulse, FlatTopEmPulse, GaussianEmPulse, PulseSequence,
};
use crate::sweep::{Axis, SweepBase, SweepMode, SweepSpec};
use crate::units::rb87_preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    #[default]
    Gaussian,
    FlatTop,
    None,
}

/// `[pulse]`. Areas are in units of π; an amplitude given directly takes
/// precedence over the matching area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    #[serde(default)]
    pub shape: PulseShape,
    pub area: Option<f64>,
    pub omega0: Option<f64>,
    pub area_delta: Option<f64>,
    pub delta_bar: Option<f64>,
    pub tau: Option<f64>,
    pub tau_delta: Option<f64>,
    pub delta_tau: Option<f64>,
    pub delta0: Option<f64>,
    pub convention: Option<AreaConvention>,
    pub tau_rise: Option<f64>,
    pub tau_fall: Option<f64>,
    /// Flat-top only: D-pulse centres sit this many `τ_Δ` outside the plateau edges.
    pub d_offset: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediumPreset {
    Rb87,
}

/// `[medium]`. Explicit rates override the preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    pub preset: Option<MediumPreset>,
    pub gamma: Option<f64>,
    #[serde(rename = "Gamma")]
    pub big_gamma: Option<f64>,
    pub doppler_width: Option<f64>,
    pub gain: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_classes: Option<usize>,
    pub span_factor: Option<f64>,
    pub extra_cover: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub padding: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub record_stride: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Doppler shift of the single class integrated by `simulate`.
    pub kv: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub prefix: Option<String>,
    pub svg: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub mode: SweepMode,
    pub x: Axis,
    pub y: Axis,
    #[serde(default = "default_observables")]
    pub observables: Vec<String>,
    #[serde(default = "default_spot_check")]
    pub spot_check: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_observables() -> Vec<String> {
    vec!["W_fin".into(), "absorptive_index".into()]
}

fn default_spot_check() -> usize {
    5
}

/// A whole configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub pulse: PulseSection,
    #[serde(default)]
    pub medium: MediumSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub window: WindowSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
    pub sweep: Option<SweepSection>,
}

/// Fully determined inputs of a simulate or ensemble run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub pulses: PulseSequence,
    pub medium: MediumParams,
    pub grid: GridSpec,
    pub window: SimWindow,
    pub kv: f64,
    pub convention: AreaConvention,
    pub svg: bool,
}

fn need(v: Option<f64>, field: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("pulse.{field} is required for this pulse shape")))
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: format!("at `{}`: {}", e.path(), e.inner().message()),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path)
    }

    pub fn convention(&self) -> AreaConvention {
        self.pulse.convention.unwrap_or_default()
    }

    pub fn resolve_medium(&self) -> Result<MediumParams> {
        let m = &self.medium;
        let mut medium = match m.preset {
            Some(MediumPreset::Rb87) => rb87_preset().0,
            None => MediumParams::spontaneous(1.0, 0.0),
        };
        if let Some(g) = m.gamma {
            medium.gamma = g;
            medium.big_gamma = 2.0 * g;
        }
        if let Some(g) = m.big_gamma {
            medium.big_gamma = g;
        }
        if let Some(d) = m.doppler_width {
            medium.doppler_width = d;
        }
        if let Some(g) = m.gain {
            medium.gain = g;
        }
        medium.validate().map_err(|e| Error::Config(format!("medium: {e}")))?;
        Ok(medium)
    }

    pub fn resolve_pulses(&self) -> Result<PulseSequence> {
        let p = &self.pulse;
        let conv = self.convention();
        let delta0 = p.delta0.unwrap_or(0.0);
        let seq = match p.shape {
            PulseShape::None => PulseSequence::new(EmPulse::Zero, DPulse::Offset { delta0 }),
            PulseShape::Gaussian => {
                let tau = need(p.tau, "tau")?;
                let tau_delta = p.tau_delta.unwrap_or(tau);
                let omega0 = match (p.omega0, p.area) {
                    (Some(o), _) => o,
                    (None, Some(a)) => area_to_amplitude(pi_units(a), tau, conv)?,
                    (None, None) => return Err(Error::Config("pulse.area or pulse.omega0 is required".into())),
                };
                let delta_bar = match (p.delta_bar, p.area_delta) {
                    (Some(d), _) => d,
                    (None, Some(a)) => area_to_amplitude(pi_units(a), tau_delta, conv)?,
                    (None, None) => 0.0,
                };
                let em = EmPulse::Gaussian(GaussianEmPulse {
                    omega0,
                    tau_omega: tau,
                    center: 0.0,
                });
                let d = if delta_bar == 0.0 {
                    DPulse::Offset { delta0 }
                } else {
                    DPulse::DoubleGaussian(DoubleGaussianDPulse {
                        delta0,
                        delta_bar,
                        tau_delta,
                        delta_tau: p.delta_tau.unwrap_or(1.5 * tau),
                    })
                };
                PulseSequence::new(em, d)
            }
            PulseShape::FlatTop => {
                let omega0 = need(p.omega0, "omega0")?;
                let tau_rise = need(p.tau_rise, "tau_rise")?;
                let tau_fall = p.tau_fall.unwrap_or(tau_rise);
                // Flat-top areas are always the integral of Ω.
                let em = match p.area {
                    Some(a) => flat_top_for_area(pi_units(a), omega0, tau_rise, tau_fall)?,
                    None => FlatTopEmPulse {
                        omega0,
                        t_flat: 0.0,
                        tau_rise,
                        tau_fall,
                    },
                };
                let delta_bar = p.delta_bar.unwrap_or(0.0);
                let d = if delta_bar == 0.0 {
                    DPulse::Offset { delta0 }
                } else {
                    let tau_delta = need(p.tau_delta, "tau_delta")?;
                    let delta_tau = p
                        .delta_tau
                        .unwrap_or(0.5 * em.t_flat + p.d_offset.unwrap_or(FLAT_TOP_D_OFFSET) * tau_delta);
                    DPulse::DoubleGaussian(DoubleGaussianDPulse {
                        delta0,
                        delta_bar,
                        tau_delta,
                        delta_tau,
                    })
                };
                PulseSequence::new(EmPulse::FlatTop(em), d)
            }
        };
        seq.validate().map_err(|e| Error::Config(format!("pulse: {e}")))?;
        Ok(seq)
    }

    pub fn resolve_window(&self, pulses: &PulseSequence) -> Result<SimWindow> {
        let w = &self.window;
        let mut win = default_window(pulses, w.padding.unwrap_or(DEFAULT_PADDING));
        if let Some(t) = w.t_start {
            win.t_start = t;
        }
        if let Some(t) = w.t_end {
            win.t_end = t;
        }
        if let Some(v) = w.rel_tol {
            win.rel_tol = v;
        }
        if let Some(v) = w.abs_tol {
            win.abs_tol = v;
        }
        if let Some(v) = w.record_stride {
            win.record_stride = v;
        }
        win.validate().map_err(|e| Error::Config(format!("window: {e}")))?;
        Ok(win)
    }

    pub fn resolve_grid(&self, default_classes: usize) -> GridSpec {
        GridSpec {
            n_classes: self.grid.n_classes.unwrap_or(default_classes),
            span_factor: self.grid.span_factor.unwrap_or(DEFAULT_SPAN),
            extra_cover: self.grid.extra_cover,
        }
    }

    /// Inputs of a `simulate` or `ensemble` run.
    pub fn resolve(&self) -> Result<Resolved> {
        let pulses = self.resolve_pulses()?;
        Ok(Resolved {
            window: self.resolve_window(&pulses)?,
            medium: self.resolve_medium()?,
            grid: self.resolve_grid(crate::ensemble::DEFAULT_CLASSES),
            kv: self.run.kv.unwrap_or(0.0),
            convention: self.convention(),
            svg: self.output.svg.unwrap_or(true),
            pulses,
        })
    }

    /// Sweep spec from `[sweep]` plus the pulse, medium, grid and window sections.
    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Config("a [sweep] section is required".into()))?;
        let defaults = SweepBase::default();
        let spec = SweepSpec {
            x: s.x,
            y: s.y,
            base: SweepBase {
                area: self.pulse.area.unwrap_or(defaults.area),
                tau: self.pulse.tau.unwrap_or(defaults.tau),
                medium: self.resolve_medium()?,
                convention: self.convention(),
                grid: self.resolve_grid(SWEEP_CLASSES),
                padding: self.window.padding.unwrap_or(DEFAULT_PADDING),
                rel_tol: self.window.rel_tol.unwrap_or(defaults.rel_tol),
                abs_tol: self.window.abs_tol.unwrap_or(defaults.abs_tol),
            },
            observables: s.observables.clone(),
            mode: s.mode,
            spot_check: s.spot_check,
            seed: s.seed,
        };
        spec.validate().map_err(|e| Error::Config(format!("sweep: {e}")))?;
        Ok(spec)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn prefix(&self) -> String {
        self.output.prefix.clone().unwrap_or_default()
    }
}

pub const DEFAULT_PADDING: f64 = 4.0;
/// D-pulse centres sit one `τ_Δ` beyond the plateau edges by default.
pub const FLAT_TOP_D_OFFSET: f64 = 1.0;
