//! Conversions between `γ`-scaled units and SI for the Rb-87 D2 line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::MediumParams;

/// Rb-87 `5²S₁/₂ F=2, m_F=2 ↔ 5²P₃/₂ F=3, m_F=3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rb87 {
    /// Population decay rate in s⁻¹.
    pub gamma_si: f64,
    /// Transition wavelength in m.
    pub wavelength: f64,
    /// Doppler width at 300 K in units of `γ`.
    pub doppler_width_300k: f64,
}

impl Rb87 {
    pub const fn new() -> Self {
        Rb87 {
            gamma_si: 2.0 * PI * 5.83e6,
            wavelength: 780e-9,
            doppler_width_300k: 530.0,
        }
    }

    /// `1/γ` in seconds.
    pub fn time_unit(&self) -> f64 {
        1.0 / self.gamma_si
    }

    pub fn to_seconds(&self, t: f64) -> f64 {
        t * self.time_unit()
    }

    pub fn from_seconds(&self, seconds: f64) -> f64 {
        seconds * self.gamma_si
    }

    /// Frequency in units of `γ` to angular frequency in s⁻¹.
    pub fn to_rad_per_second(&self, f: f64) -> f64 {
        f * self.gamma_si
    }
}

impl Default for Rb87 {
    fn default() -> Self {
        Rb87::new()
    }
}

/// Room-temperature medium (`γ = 1`, `Γ = 2γ`, `Δω_D = 530γ`) and its unit scale.
pub fn rb87_preset() -> (MediumParams, Rb87) {
    let rb = Rb87::new();
    (MediumParams::spontaneous(1.0, rb.doppler_width_300k), rb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_scale_is_tens_of_nanoseconds() {
        let (m, rb) = rb87_preset();
        assert!((rb.time_unit() - 2.73e-8).abs() < 0.01e-8);
        assert!((rb.to_seconds(0.01) - 0.273e-9).abs() < 0.001e-9);
        assert_eq!(m.doppler_width, 530.0);
        assert_eq!(m.big_gamma, 2.0 * m.gamma);
        let t = 0.05;
        assert!((rb.from_seconds(rb.to_seconds(t)) - t).abs() < 1e-16);
        assert!((rb.to_rad_per_second(530.0) - 530.0 * 2.0 * PI * 5.83e6).abs() < 1.0);
    }
}
