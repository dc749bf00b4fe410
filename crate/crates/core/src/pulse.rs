//! EM-pulse `Ω(t)` and D-pulse `Δ(t)` waveforms.
//!
//! All times are in units of `1/γ` and all frequencies in units of `γ`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::SimWindow;
use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Half-width of the window returned for sequences with no finite support.
pub const MIN_HALF_WINDOW: f64 = 0.01;

/// Gaussian envelope `Ω₀ exp(-(t - center)² / τ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianEmPulse {
    pub omega0: f64,
    pub tau_omega: f64,
    #[serde(default)]
    pub center: f64,
}

/// Symmetric pair of Gaussian detuning bumps at `±Δτ` on top of `Δ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleGaussianDPulse {
    #[serde(default)]
    pub delta0: f64,
    pub delta_bar: f64,
    pub tau_delta: f64,
    pub delta_tau: f64,
}

/// Plateau of height `omega0` and length `t_flat`, centred on `t = 0`, with
/// half-Gaussian rise and fall edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatTopEmPulse {
    pub omega0: f64,
    pub t_flat: f64,
    pub tau_rise: f64,
    pub tau_fall: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum EmPulse {
    Gaussian(GaussianEmPulse),
    FlatTop(FlatTopEmPulse),
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum DPulse {
    DoubleGaussian(DoubleGaussianDPulse),
    Offset { delta0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub em: EmPulse,
    pub d: DPulse,
}

#[inline]
fn gauss(x: f64, width: f64) -> f64 {
    (-(x / width).powi(2)).exp()
}

impl FlatTopEmPulse {
    fn plateau(&self) -> (f64, f64) {
        (-0.5 * self.t_flat, 0.5 * self.t_flat)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (a, b) = self.plateau();
        if t < a {
            if self.tau_rise > 0.0 {
                self.omega0 * gauss(t - a, self.tau_rise)
            } else {
                0.0
            }
        } else if t > b {
            if self.tau_fall > 0.0 {
                self.omega0 * gauss(t - b, self.tau_fall)
            } else {
                0.0
            }
        } else {
            self.omega0
        }
    }

    /// `∫Ω dt` over the whole real line.
    pub fn integral_area(&self) -> f64 {
        self.omega0 * (self.t_flat + 0.5 * SQRT_PI * (self.tau_rise + self.tau_fall))
    }
}

impl EmPulse {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            EmPulse::Gaussian(g) => g.omega0 * gauss(t - g.center, g.tau_omega),
            EmPulse::FlatTop(f) => f.eval(t),
            EmPulse::Zero => 0.0,
        }
    }

    pub fn peak(&self) -> f64 {
        match self {
            EmPulse::Gaussian(g) => g.omega0,
            EmPulse::FlatTop(f) => f.omega0,
            EmPulse::Zero => 0.0,
        }
    }
}

impl DPulse {
    /// Nominal detuning for an atom at rest.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            DPulse::DoubleGaussian(d) => {
                d.delta0
                    + d.delta_bar
                        * (gauss(t - d.delta_tau, d.tau_delta) + gauss(t + d.delta_tau, d.tau_delta))
            }
            DPulse::Offset { delta0 } => *delta0,
        }
    }

    pub fn offset(&self) -> f64 {
        match self {
            DPulse::DoubleGaussian(d) => d.delta0,
            DPulse::Offset { delta0 } => *delta0,
        }
    }

    /// `Δ̄`, or zero when there is no D pulse.
    pub fn amplitude(&self) -> f64 {
        match self {
            DPulse::DoubleGaussian(d) => d.delta_bar,
            DPulse::Offset { .. } => 0.0,
        }
    }
}

impl PulseSequence {
    pub fn new(em: EmPulse, d: DPulse) -> Self {
        PulseSequence { em, d }
    }

    pub fn zero() -> Self {
        PulseSequence {
            em: EmPulse::Zero,
            d: DPulse::Offset { delta0: 0.0 },
        }
    }

    /// Gaussian EM pulse between two Gaussian D pulses, the standard ASIT layout.
    pub fn gaussian(omega0: f64, tau_omega: f64, delta0: f64, delta_bar: f64, tau_delta: f64, delta_tau: f64) -> Self {
        PulseSequence {
            em: EmPulse::Gaussian(GaussianEmPulse {
                omega0,
                tau_omega,
                center: 0.0,
            }),
            d: DPulse::DoubleGaussian(DoubleGaussianDPulse {
                delta0,
                delta_bar,
                tau_delta,
                delta_tau,
            }),
        }
    }

    #[inline]
    pub fn omega(&self, t: f64) -> f64 {
        self.em.eval(t)
    }

    /// Detuning seen by an atom with Doppler shift `kv`: `Δ(t) - kv`.
    #[inline]
    pub fn delta(&self, t: f64, kv: f64) -> f64 {
        self.d.eval(t) - kv
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be finite, got {v}")))
            }
        };
        match &self.em {
            EmPulse::Gaussian(g) => {
                finite("omega0", g.omega0)?;
                finite("center", g.center)?;
                if g.omega0 < 0.0 {
                    return Err(Error::invalid("omega0 must be non-negative"));
                }
                if !(g.tau_omega > 0.0) || !g.tau_omega.is_finite() {
                    return Err(Error::invalid("tau_omega must be positive"));
                }
            }
            EmPulse::FlatTop(f) => {
                for (name, v) in [
                    ("omega0", f.omega0),
                    ("t_flat", f.t_flat),
                    ("tau_rise", f.tau_rise),
                    ("tau_fall", f.tau_fall),
                ] {
                    finite(name, v)?;
                    if v < 0.0 {
                        return Err(Error::invalid(format!("{name} must be non-negative")));
                    }
                }
            }
            EmPulse::Zero => {}
        }
        match &self.d {
            DPulse::DoubleGaussian(d) => {
                finite("delta0", d.delta0)?;
                finite("delta_bar", d.delta_bar)?;
                finite("delta_tau", d.delta_tau)?;
                if !(d.tau_delta > 0.0) || !d.tau_delta.is_finite() {
                    return Err(Error::invalid("tau_delta must be positive"));
                }
                if d.delta_tau < 0.0 {
                    return Err(Error::invalid("delta_tau must be non-negative"));
                }
            }
            DPulse::Offset { delta0 } => finite("delta0", *delta0)?,
        }
        Ok(())
    }
}

/// How a pulse area relates to its amplitude and width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AreaConvention {
    /// `A = amplitude · τ / √2`.
    #[default]
    Caption,
    /// `A = ∫ amplitude · exp(-t²/τ²) dt = amplitude · τ · √π`.
    Integral,
}

impl AreaConvention {
    fn factor(self) -> f64 {
        match self {
            AreaConvention::Caption => 1.0 / SQRT_2,
            AreaConvention::Integral => SQRT_PI,
        }
    }
}

impl FromStr for AreaConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "caption" => Ok(AreaConvention::Caption),
            "integral" => Ok(AreaConvention::Integral),
            other => Err(Error::invalid(format!(
                "unknown area convention {other:?} (expected \"caption\" or \"integral\")"
            ))),
        }
    }
}

impl fmt::Display for AreaConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AreaConvention::Caption => "caption",
            AreaConvention::Integral => "integral",
        })
    }
}

/// Peak amplitude of a Gaussian of width `tau` carrying `area` radians.
pub fn area_to_amplitude(area: f64, tau: f64, convention: AreaConvention) -> Result<f64> {
    if !(area >= 0.0) || !area.is_finite() {
        return Err(Error::invalid(format!("area must be finite and non-negative, got {area}")));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("width must be positive, got {tau}")));
    }
    Ok(area / (tau * convention.factor()))
}

pub fn amplitude_to_area(amplitude: f64, tau: f64, convention: AreaConvention) -> Result<f64> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::invalid(format!(
            "amplitude must be finite and non-negative, got {amplitude}"
        )));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("width must be positive, got {tau}")));
    }
    Ok(amplitude * tau * convention.factor())
}

/// Flat-top pulse whose plateau length is chosen so that `∫Ω dt = area`.
///
/// The edges alone contribute `Ω₀ (τ_r + τ_f) √π / 2`; an area equal to that
/// minimum yields a zero-length plateau.
pub fn flat_top_for_area(area: f64, omega0: f64, tau_rise: f64, tau_fall: f64) -> Result<FlatTopEmPulse> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(Error::invalid("plateau amplitude must be positive"));
    }
    if !(tau_rise >= 0.0 && tau_fall >= 0.0) {
        return Err(Error::invalid("edge widths must be non-negative"));
    }
    let minimum = omega0 * (tau_rise + tau_fall) * SQRT_PI / 2.0;
    let slack = 1e-12 * minimum.max(1.0);
    if !(area >= minimum - slack) || !area.is_finite() {
        return Err(Error::Infeasible {
            requested: area,
            minimum,
        });
    }
    Ok(FlatTopEmPulse {
        omega0,
        t_flat: ((area - minimum) / omega0).max(0.0),
        tau_rise,
        tau_fall,
    })
}

/// Symmetric window `[-h, h]` covering every pulse plus `padding` widths.
pub fn default_window(seq: &PulseSequence, padding: f64) -> SimWindow {
    let mut half: f64 = 0.0;
    let mut min_width = f64::INFINITY;
    let d_extent = |w: f64, half: &mut f64, min_width: &mut f64| {
        if let DPulse::DoubleGaussian(d) = &seq.d {
            *half = half.max(d.delta_tau + padding * d.tau_delta.max(w));
            *min_width = min_width.min(d.tau_delta);
        }
    };
    match &seq.em {
        EmPulse::Gaussian(g) => {
            half = half.max(g.center.abs() + padding * g.tau_omega);
            min_width = min_width.min(g.tau_omega);
            d_extent(g.tau_omega, &mut half, &mut min_width);
        }
        EmPulse::FlatTop(f) => {
            half = half.max(0.5 * f.t_flat + padding * f.tau_rise.max(f.tau_fall));
            for w in [f.tau_rise, f.tau_fall] {
                if w > 0.0 {
                    min_width = min_width.min(w);
                }
            }
            d_extent(0.0, &mut half, &mut min_width);
        }
        EmPulse::Zero => d_extent(0.0, &mut half, &mut min_width),
    }
    if !(half > 0.0) {
        half = MIN_HALF_WINDOW;
    }
    let mut window = SimWindow::new(-half, half);
    if min_width.is_finite() {
        window.record_stride = window.record_stride.max(SAMPLES_PER_WIDTH / min_width);
    }
    window
}

/// Minimum number of recorded samples per pulse width in default windows.
pub const SAMPLES_PER_WIDTH: f64 = 200.0;

/// Converts an area given in units of π to radians.
pub fn pi_units(area_over_pi: f64) -> f64 {
    area_over_pi * PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn fig4_like() -> PulseSequence {
        PulseSequence::gaussian(4443.0, 0.01, 0.0, 4443.0, 0.01, 0.015)
    }

    /// Composite Simpson rule on `n` (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn gaussian_peak_and_width() {
        let seq = fig4_like();
        assert_eq!(seq.omega(0.0), 4443.0);
        assert!((seq.omega(0.01) - 4443.0 / E).abs() < 1e-9);
    }

    #[test]
    fn flat_top_plateau_is_exact() {
        let f = FlatTopEmPulse {
            omega0: 1772.0,
            t_flat: 0.01,
            tau_rise: 0.0015,
            tau_fall: 0.0015,
        };
        for t in [-0.005, -0.001, 0.0, 0.004, 0.005] {
            assert_eq!(f.eval(t), 1772.0);
        }
    }

    #[test]
    fn d_pulse_values() {
        let seq = PulseSequence::gaussian(0.0, 0.01, 0.0, 4443.0, 0.01, 0.015);
        let expected = 4443.0 * (1.0 + (-9.0f64).exp());
        assert!((seq.delta(0.015, 0.0) - expected).abs() < 1e-9);
        let t = 0.007;
        assert_eq!(seq.delta(t, seq.d.eval(t)), 0.0);
        let doppler_only = PulseSequence::gaussian(0.0, 0.01, 0.0, 0.0, 0.01, 0.015);
        assert_eq!(doppler_only.delta(0.3, 100.0), -100.0);
    }

    #[test]
    fn caption_amplitude_for_ten_pi() {
        let a = area_to_amplitude(10.0 * PI, 0.01, AreaConvention::Caption).unwrap();
        assert!((a - 10.0 * PI * SQRT_2 / 0.01).abs() < 1e-9);
        assert!((a - 4442.88).abs() < 0.01);
        assert_eq!(area_to_amplitude(0.0, 0.01, AreaConvention::Caption).unwrap(), 0.0);
    }

    #[test]
    fn integral_amplitude_matches_quadrature() {
        let a = area_to_amplitude(2.0 * PI, 0.01, AreaConvention::Integral).unwrap();
        assert!((a - 354.49).abs() < 0.01);
        let g = EmPulse::Gaussian(GaussianEmPulse {
            omega0: a,
            tau_omega: 0.01,
            center: 0.0,
        });
        let area = simpson(|t| g.eval(t), -0.1, 0.1, 4000);
        assert!((area / (2.0 * PI) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unknown_convention_is_rejected() {
        assert!(matches!(
            "fwhm".parse::<AreaConvention>(),
            Err(Error::InvalidArgument(_))
        ));
        assert_eq!("integral".parse::<AreaConvention>().unwrap(), AreaConvention::Integral);
    }

    #[test]
    fn flat_top_area_by_quadrature() {
        let area = 9.0 * PI;
        let f = flat_top_for_area(area, 1772.0, 0.0015, 0.0015).unwrap();
        let (a, b) = f.plateau();
        // Integrate each smooth piece separately so Simpson sees no kinks.
        let rise = simpson(|t| f.eval(t), a - 0.03, a, 20_000);
        let flat = simpson(|t| f.eval(t), a, b, 2);
        let fall = simpson(|t| f.eval(t), b, b + 0.03, 20_000);
        let total = rise + flat + fall;
        assert!((total / area - 1.0).abs() < 1e-6, "{total} vs {area}");
        assert!((f.integral_area() / area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_top_degenerate_and_infeasible() {
        let min = 1772.0 * 0.003 * SQRT_PI / 2.0;
        let f = flat_top_for_area(min, 1772.0, 0.0015, 0.0015).unwrap();
        assert_eq!(f.t_flat, 0.0);
        match flat_top_for_area(0.5 * min, 1772.0, 0.0015, 0.0015) {
            Err(Error::Infeasible { minimum, .. }) => assert!((minimum - min).abs() < 1e-12),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn flat_top_is_c1_at_junctions() {
        let f = flat_top_for_area(9.0 * PI, 1772.0, 0.0015, 0.0015).unwrap();
        let (a, b) = f.plateau();
        // One-sided slope at x from direction s, Richardson-extrapolated to the junction.
        let slope = |x: f64, s: f64| {
            let d = |h: f64| (f.eval(x + s * h) - f.eval(x + 2.0 * s * h)) / (-s * h);
            let h = 1e-7;
            2.0 * d(h / 2.0) - d(h)
        };
        for x in [a, b] {
            assert!((f.eval(x - 1e-12) - f.eval(x + 1e-12)).abs() < 1e-6 * f.omega0);
            let jump = (slope(x, -1.0) - slope(x, 1.0)).abs();
            assert!(jump < 1e-6 * f.omega0, "slope jump {jump} at {x}");
        }
    }

    #[test]
    fn default_window_arithmetic() {
        let w = default_window(&fig4_like(), 4.0);
        assert!((w.t_start + 0.055).abs() < 1e-15 && (w.t_end - 0.055).abs() < 1e-15);
        let z = default_window(&PulseSequence::zero(), 4.0);
        assert_eq!((z.t_start, z.t_end), (-MIN_HALF_WINDOW, MIN_HALF_WINDOW));
    }

    #[test]
    fn default_window_tails_are_small() {
        let seq = fig4_like();
        // At padding 4 the nearer D Gaussian sits at exactly e^-16 of its peak.
        let w = default_window(&seq, 4.0);
        let d_peak = seq.d.eval(0.015);
        let d_edge = seq.d.eval(w.t_end);
        assert!((d_edge / seq.d.amplitude() - (-16.0f64).exp()).abs() < 1e-15);
        assert!(seq.omega(w.t_end) < 1e-7 * seq.em.peak());
        let w = default_window(&seq, 4.1);
        assert!(seq.d.eval(w.t_end) < 1e-7 * d_peak);
        assert!(seq.d.eval(w.t_start) < 1e-7 * d_peak);
    }

    #[test]
    fn gaussian_symmetry() {
        let seq = fig4_like();
        for t in [0.001, 0.0123, 0.04] {
            assert_eq!(seq.omega(t), seq.omega(-t));
            assert!((seq.delta(t, 0.0) - seq.delta(-t, 0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn validation_catches_bad_widths() {
        let mut seq = fig4_like();
        if let EmPulse::Gaussian(g) = &mut seq.em {
            g.tau_omega = 0.0;
        }
        assert!(seq.validate().is_err());
        let mut seq = fig4_like();
        if let EmPulse::Gaussian(g) = &mut seq.em {
            g.omega0 = -1.0;
        }
        assert!(seq.validate().is_err());
        assert!(fig4_like().validate().is_ok());
    }
}
