//! Driven-dissipative optical Bloch equations for a single velocity class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, Tolerances};
use crate::pulse::PulseSequence;

/// Bloch vector: `U = 2 Re σ₁₂`, `V = 2 Im σ₁₂`, `W = σ₂₂ - σ₁₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl BlochState {
    pub const GROUND: BlochState = BlochState {
        u: 0.0,
        v: 0.0,
        w: -1.0,
    };

    pub fn new(u: f64, v: f64, w: f64) -> Self {
        BlochState { u, v, w }
    }

    pub fn norm_sq(&self) -> f64 {
        self.u * self.u + self.v * self.v + self.w * self.w
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        BlochState {
            u: a[0],
            v: a[1],
            w: a[2],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.w.is_finite()
    }

    /// Populations and coherence recovered from the Bloch components.
    pub fn sigma11(&self) -> f64 {
        0.5 * (1.0 - self.w)
    }

    pub fn sigma22(&self) -> f64 {
        0.5 * (1.0 + self.w)
    }
}

impl Default for BlochState {
    fn default() -> Self {
        BlochState::GROUND
    }
}

/// Relaxation rates, Doppler width and gain, all in units of `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    /// Population decay rate.
    pub gamma: f64,
    /// Coherence decay rate; `U` and `V` decay at `Γ/2`.
    #[serde(rename = "Gamma")]
    pub big_gamma: f64,
    pub doppler_width: f64,
    pub gain: f64,
}

impl Default for MediumParams {
    fn default() -> Self {
        MediumParams::spontaneous(1.0, 0.0)
    }
}

impl MediumParams {
    /// Spontaneous emission only: `Γ = 2γ`.
    pub fn spontaneous(gamma: f64, doppler_width: f64) -> Self {
        MediumParams {
            gamma,
            big_gamma: 2.0 * gamma,
            doppler_width,
            gain: 1.0,
        }
    }

    /// No relaxation at all.
    pub fn coherent(doppler_width: f64) -> Self {
        MediumParams {
            gamma: 0.0,
            big_gamma: 0.0,
            doppler_width,
            gain: 1.0,
        }
    }

    pub fn is_coherent(&self) -> bool {
        self.gamma == 0.0 && self.big_gamma == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma", self.gamma),
            ("Gamma", self.big_gamma),
            ("doppler_width", self.doppler_width),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        if !self.gain.is_finite() {
            return Err(Error::invalid("gain must be finite"));
        }
        Ok(())
    }
}

/// Integration interval, tolerances and recording density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimWindow {
    pub t_start: f64,
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Recorded samples per unit `1/γ`.
    pub record_stride: f64,
}

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_RECORD_STRIDE: f64 = 2e4;

impl SimWindow {
    pub fn new(t_start: f64, t_end: f64) -> Self {
        SimWindow {
            t_start,
            t_end,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            record_stride: DEFAULT_RECORD_STRIDE,
        }
    }

    /// Total process time `T`.
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            rel: self.rel_tol,
            abs: self.abs_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > self.t_start) || !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(Error::invalid(format!(
                "window [{}, {}] must satisfy t_end > t_start",
                self.t_start, self.t_end
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::invalid(format!("rel_tol must lie in (0, 1e-3], got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::invalid(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if !(self.record_stride > 0.0) || !self.record_stride.is_finite() {
            return Err(Error::invalid("record_stride must be positive"));
        }
        Ok(())
    }

    /// Number of uniformly spaced recorded samples, endpoints included.
    pub fn sample_count(&self) -> usize {
        ((self.duration() * self.record_stride).round() as usize).max(1) + 1
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let n = self.sample_count();
        let dt = self.duration() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.t_end
                } else {
                    self.t_start + i as f64 * dt
                }
            })
            .collect()
    }
}

/// Right-hand side of the Bloch equations with relaxation toward `W = -1`.
pub fn bloch_rhs(state: BlochState, omega: f64, delta: f64, medium: &MediumParams) -> Result<BlochState> {
    if !state.is_finite() || !omega.is_finite() || !delta.is_finite() {
        return Err(Error::invalid("bloch_rhs inputs must be finite"));
    }
    if !medium.gamma.is_finite() || !medium.big_gamma.is_finite() {
        return Err(Error::invalid("relaxation rates must be finite"));
    }
    Ok(BlochState::from_array(rhs_raw(
        &state.to_array(),
        omega,
        delta,
        medium.gamma,
        0.5 * medium.big_gamma,
    )))
}

#[inline(always)]
fn rhs_raw(y: &[f64; 3], omega: f64, delta: f64, gamma: f64, half_gamma: f64) -> [f64; 3] {
    let (u, v, w) = (y[0], y[1], y[2]);
    [
        delta * v - half_gamma * u,
        -delta * u - omega * w - half_gamma * v,
        omega * v - gamma * (w + 1.0),
    ]
}

/// Bloch equations for one velocity class under a pulse sequence.
pub struct BlochSystem<'a> {
    pub pulses: &'a PulseSequence,
    pub kv: f64,
    gamma: f64,
    half_gamma: f64,
}

impl<'a> BlochSystem<'a> {
    pub fn new(pulses: &'a PulseSequence, kv: f64, medium: &MediumParams) -> Self {
        BlochSystem {
            pulses,
            kv,
            gamma: medium.gamma,
            half_gamma: 0.5 * medium.big_gamma,
        }
    }
}

impl ode::OdeSystem<3> for BlochSystem<'_> {
    #[inline]
    fn rhs(&self, t: f64, y: &[f64; 3]) -> [f64; 3] {
        rhs_raw(
            y,
            self.pulses.omega(t),
            self.pulses.delta(t, self.kv),
            self.gamma,
            self.half_gamma,
        )
    }
}

/// One recorded sample of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub omega: f64,
    pub delta: f64,
    pub state: BlochState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kv: f64,
    pub points: Vec<TrajectoryPoint>,
    /// State at `t_end` as returned by the integrator, not interpolated.
    pub final_state: BlochState,
    pub stats: ode::Stats,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.t)
    }
}

fn check_inputs(initial: &BlochState, kv: f64, pulses: &PulseSequence, medium: &MediumParams, window: &SimWindow) -> Result<()> {
    if !initial.is_finite() || !kv.is_finite() {
        return Err(Error::invalid("initial state and kv must be finite"));
    }
    pulses.validate()?;
    medium.validate()?;
    window.validate()
}

/// Integrates one velocity class over `window`, recording on its uniform grid.
pub fn integrate_trajectory(
    initial: BlochState,
    pulses: &PulseSequence,
    kv: f64,
    medium: &MediumParams,
    window: &SimWindow,
) -> Result<Trajectory> {
    check_inputs(&initial, kv, pulses, medium, window)?;
    let sys = BlochSystem::new(pulses, kv, medium);
    let times = window.sample_times();
    let mut points = Vec::with_capacity(times.len());
    let sol = ode::integrate(
        &sys,
        window.t_start,
        initial.to_array(),
        window.t_end,
        window.tolerances(),
        &times,
        |_, t, y| {
            points.push(TrajectoryPoint {
                t,
                omega: pulses.omega(t),
                delta: pulses.delta(t, kv),
                state: BlochState::from_array(*y),
            })
        },
    )?;
    Ok(Trajectory {
        kv,
        points,
        final_state: BlochState::from_array(sol.y),
        stats: sol.stats,
    })
}

/// Final state only; no samples are recorded.
pub fn integrate_final(
    initial: BlochState,
    pulses: &PulseSequence,
    kv: f64,
    medium: &MediumParams,
    window: &SimWindow,
) -> Result<BlochState> {
    check_inputs(&initial, kv, pulses, medium, window)?;
    let sys = BlochSystem::new(pulses, kv, medium);
    let sol = ode::integrate(
        &sys,
        window.t_start,
        initial.to_array(),
        window.t_end,
        window.tolerances(),
        &[],
        |_, _, _| {},
    )?;
    Ok(BlochState::from_array(sol.y))
}

/// Recorded states at the window's sample times, handed to `visit` in order.
///
/// Used by the ensemble to accumulate without materialising trajectories.
pub fn integrate_visit<F>(
    initial: BlochState,
    pulses: &PulseSequence,
    kv: f64,
    medium: &MediumParams,
    window: &SimWindow,
    times: &[f64],
    mut visit: F,
) -> Result<BlochState>
where
    F: FnMut(usize, f64, BlochState),
{
    check_inputs(&initial, kv, pulses, medium, window)?;
    let sys = BlochSystem::new(pulses, kv, medium);
    let sol = ode::integrate(
        &sys,
        window.t_start,
        initial.to_array(),
        window.t_end,
        window.tolerances(),
        times,
        |i, t, y| visit(i, t, BlochState::from_array(*y)),
    )?;
    Ok(BlochState::from_array(sol.y))
}
