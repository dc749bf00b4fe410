//! Resonant three-level Λ system and its correspondence with the coherent
//! two-level Bloch equations.
//!
//! With `C̄₁ = C₁`, `C̄₂ = -i C₂`, `C̄₃ = C₃`, `Ω_p = 2Ω` and `Ω_s = 2Δ(kv, t)`,
//! the barred amplitudes obey the Bloch equations for `(W, V, U)`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_trajectory, BlochState, MediumParams, SimWindow};
use crate::error::{Error, Result};
use crate::ode::{self, OdeSystem};
use crate::pulse::{GaussianEmPulse, PulseSequence};

/// Probability amplitudes `C₁, C₂, C₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaState {
    pub re: [f64; 3],
    pub im: [f64; 3],
}

impl LambdaState {
    /// All population in `|1⟩`.
    pub const GROUND: LambdaState = LambdaState {
        re: [1.0, 0.0, 0.0],
        im: [0.0; 3],
    };

    fn to_array(self) -> [f64; 6] {
        [self.re[0], self.re[1], self.re[2], self.im[0], self.im[1], self.im[2]]
    }

    fn from_array(a: [f64; 6]) -> Self {
        LambdaState {
            re: [a[0], a[1], a[2]],
            im: [a[3], a[4], a[5]],
        }
    }

    pub fn population(&self, level: usize) -> f64 {
        self.re[level] * self.re[level] + self.im[level] * self.im[level]
    }

    pub fn norm_sq(&self) -> f64 {
        (0..3).map(|i| self.population(i)).sum()
    }

    /// Barred amplitudes `(C̄₁, C̄₂, C̄₃)` as `(re, im)` pairs.
    pub fn barred(&self) -> [(f64, f64); 3] {
        // -i (a + ib) = b - ia
        [
            (self.re[0], self.im[0]),
            (self.im[1], -self.re[1]),
            (self.re[2], self.im[2]),
        ]
    }

    /// Amplitudes whose barred form is `(W, V, U)`.
    pub fn from_bloch(b: &BlochState) -> Self {
        LambdaState {
            re: [b.w, 0.0, b.u],
            im: [0.0, b.v, 0.0],
        }
    }

    /// `(U, V, W) = (Re C̄₃, Re C̄₂, Re C̄₁)`.
    pub fn to_bloch(&self) -> BlochState {
        let c = self.barred();
        BlochState::new(c[2].0, c[1].0, c[0].0)
    }

    /// Projection on `cos Θ |1⟩ − sin Θ |3⟩`, `Θ = atan2(Ω_p, Ω_s)`.
    pub fn dark_projection(&self, pump: f64, stokes: f64) -> (f64, f64) {
        let th = pump.atan2(stokes);
        (
            th.cos() * self.re[0] - th.sin() * self.re[2],
            th.cos() * self.im[0] - th.sin() * self.im[2],
        )
    }
}

/// Pump and Stokes Rabi frequencies.
pub trait LambdaDrive {
    fn pump(&self, t: f64) -> f64;
    fn stokes(&self, t: f64) -> f64;
}

/// Drive obtained from a two-level pulse sequence at one velocity class.
#[derive(Debug, Clone, Copy)]
pub struct MappedDrive<'a> {
    pub pulses: &'a PulseSequence,
    pub kv: f64,
}

impl LambdaDrive for MappedDrive<'_> {
    fn pump(&self, t: f64) -> f64 {
        2.0 * self.pulses.omega(t)
    }

    fn stokes(&self, t: f64) -> f64 {
        2.0 * self.pulses.delta(t, self.kv)
    }
}

/// Two independent Gaussian pulses.
#[derive(Debug, Clone, Copy)]
pub struct GaussianPair {
    pub pump: GaussianEmPulse,
    pub stokes: GaussianEmPulse,
}

impl LambdaDrive for GaussianPair {
    fn pump(&self, t: f64) -> f64 {
        crate::pulse::EmPulse::Gaussian(self.pump).eval(t)
    }

    fn stokes(&self, t: f64) -> f64 {
        crate::pulse::EmPulse::Gaussian(self.stokes).eval(t)
    }
}

/// `Ω_p = 2Ω(t)`, `Ω_s = 2Δ(kv, t)`.
pub fn map_2l_to_3l(pulses: &PulseSequence, kv: f64) -> MappedDrive<'_> {
    MappedDrive { pulses, kv }
}

struct LambdaSystem<'a, D: LambdaDrive>(&'a D);

impl<D: LambdaDrive> OdeSystem<6> for LambdaSystem<'_, D> {
    #[inline]
    fn rhs(&self, t: f64, y: &[f64; 6]) -> [f64; 6] {
        let p = 0.5 * self.0.pump(t);
        let s = 0.5 * self.0.stokes(t);
        // i dC/dt = H C with H = [[0, p, 0], [p, 0, s], [0, s, 0]].
        let hre = [p * y[1], p * y[0] + s * y[2], s * y[1]];
        let him = [p * y[4], p * y[3] + s * y[5], s * y[4]];
        [him[0], him[1], him[2], -hre[0], -hre[1], -hre[2]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<LambdaState>,
    pub final_state: LambdaState,
}

/// Integrates the Λ system over `window`, sampling on its grid.
pub fn integrate_lambda<D: LambdaDrive>(initial: LambdaState, drive: &D, window: &SimWindow) -> Result<LambdaTrajectory> {
    window.validate()?;
    let y0 = initial.to_array();
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial amplitudes must be finite"));
    }
    let times = window.sample_times();
    let mut states = Vec::with_capacity(times.len());
    let sol = ode::integrate(
        &LambdaSystem(drive),
        window.t_start,
        y0,
        window.t_end,
        window.tolerances(),
        &times,
        |_, _, y| states.push(LambdaState::from_array(*y)),
    )?;
    Ok(LambdaTrajectory {
        times,
        states,
        final_state: LambdaState::from_array(sol.y),
    })
}

/// How Bloch components are paired with barred amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mapping {
    #[default]
    Standard,
    /// `U` and `V` exchanged; used to check that a broken mapping is detected.
    SwapUV,
}

/// Largest discrepancies between the two descriptions over a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Max over samples and components of `|Bloch − Re C̄|`.
    pub max_deviation: f64,
    /// Max `|Im C̄ⱼ|`.
    pub max_imaginary: f64,
    /// Max `| |C|² − |C(0)|² |`.
    pub max_norm_drift: f64,
}

/// Integrates both descriptions from the same initial point and compares.
///
/// The correspondence holds only without relaxation.
pub fn verify_equivalence(
    pulses: &PulseSequence,
    kv: f64,
    medium: &MediumParams,
    window: &SimWindow,
    initial: BlochState,
    mapping: Mapping,
) -> Result<EquivalenceReport> {
    if !medium.is_coherent() {
        return Err(Error::invalid(
            "the two-level/three-level correspondence requires gamma = Gamma = 0",
        ));
    }
    let two = integrate_trajectory(initial, pulses, kv, medium, window)?;
    let three = integrate_lambda(LambdaState::from_bloch(&initial), &map_2l_to_3l(pulses, kv), window)?;
    let n0 = LambdaState::from_bloch(&initial).norm_sq();
    let mut rep = EquivalenceReport {
        max_deviation: 0.0,
        max_imaginary: 0.0,
        max_norm_drift: 0.0,
    };
    for (p, c) in two.points.iter().zip(&three.states) {
        let bar = c.barred();
        let (u3, v3) = match mapping {
            Mapping::Standard => (bar[2].0, bar[1].0),
            Mapping::SwapUV => (bar[1].0, bar[2].0),
        };
        let dev = (p.state.u - u3)
            .abs()
            .max((p.state.v - v3).abs())
            .max((p.state.w - bar[0].0).abs());
        rep.max_deviation = rep.max_deviation.max(dev);
        for b in bar {
            rep.max_imaginary = rep.max_imaginary.max(b.1.abs());
        }
        rep.max_norm_drift = rep.max_norm_drift.max((c.norm_sq() - n0).abs());
    }
    Ok(rep)
}
