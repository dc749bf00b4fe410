//! Mixing angle, adiabatic following, adiabaticity margin and the
//! transparency metrics `⟨ΩV⟩` and `⟨(ΩV)²⟩ / ⟨Ω²⟩²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{BlochState, SimWindow, TrajectoryPoint};
use crate::error::{Error, Result};
use crate::pulse::PulseSequence;

/// `θ = atan2(Ω, Δ)`, in `[0, π]` for `Ω ≥ 0`. `(0, 0)` maps to `0`.
pub fn mixing_angle(omega: f64, delta: f64) -> Result<f64> {
    if omega < 0.0 || omega.is_nan() || delta.is_nan() {
        return Err(Error::invalid(format!("mixing angle needs omega >= 0, got {omega}")));
    }
    // 0.0 + omega turns a -0.0 into +0.0 so Δ < 0 maps to π, not -π.
    Ok((omega + 0.0).atan2(delta))
}

/// `φ = cos θ · W − sin θ · U`; equal to −1 on the adiabatic dark state.
pub fn adiabatic_combination(state: &BlochState, theta: f64) -> f64 {
    theta.cos() * state.w - theta.sin() * state.u
}

/// `T · min_t √(Ω₀² + Δ(v, t)²)` over the window's recorded grid.
///
/// `Ω₀` is the EM peak amplitude. Values above 10 satisfy the adiabaticity
/// condition.
pub fn adiabaticity_margin(pulses: &PulseSequence, kv: f64, window: &SimWindow) -> f64 {
    let omega0 = pulses.em.peak();
    let min_delta_sq = window
        .sample_times()
        .into_iter()
        .map(|t| pulses.delta(t, kv).powi(2))
        .fold(f64::INFINITY, f64::min);
    window.duration() * (omega0 * omega0 + min_delta_sq).sqrt()
}

/// Scalar diagnostics of one trajectory or macroscopic series.
///
/// `avg_omega_v` and `absorptive_index` exclude the gain `g`; see
/// [`MetricsReport::scaled`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(rename = "W_fin")]
    pub w_fin: f64,
    pub avg_omega_v: f64,
    pub absorptive_index: f64,
    pub theta_max: f64,
    pub theta_min: f64,
    pub adiabaticity_margin: f64,
    pub phi_final: f64,
    /// Averaging interval `[t_start, t_end]`.
    pub window: [f64; 2],
}

/// Metrics with the gain factors applied, for presentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledMetrics {
    pub g_avg_omega_v: f64,
    pub g2_absorptive_index: f64,
}

impl MetricsReport {
    pub fn scaled(&self, gain: f64) -> ScaledMetrics {
        ScaledMetrics {
            g_avg_omega_v: gain * self.avg_omega_v,
            g2_absorptive_index: gain * gain * self.absorptive_index,
        }
    }

    /// Index of `name` in [`METRIC_FIELDS`].
    pub fn field_index(name: &str) -> Option<usize> {
        METRIC_FIELDS.iter().position(|f| *f == name)
    }

    /// Looks up a field by its CSV column name.
    pub fn field(&self, name: &str) -> Option<f64> {
        Some(match name {
            "W_fin" => self.w_fin,
            "avg_omega_v" => self.avg_omega_v,
            "absorptive_index" => self.absorptive_index,
            "theta_max" => self.theta_max,
            "theta_min" => self.theta_min,
            "adiabaticity_margin" => self.adiabaticity_margin,
            "phi_final" => self.phi_final,
            _ => return None,
        })
    }
}

/// Column names of [`MetricsReport`] in output order.
pub const METRIC_FIELDS: [&str; 7] = [
    "W_fin",
    "avg_omega_v",
    "absorptive_index",
    "theta_max",
    "theta_min",
    "adiabaticity_margin",
    "phi_final",
];

/// Trapezoidal time average of `f` over the samples.
pub fn time_average(points: &[TrajectoryPoint], f: impl Fn(&TrajectoryPoint) -> f64) -> f64 {
    if points.len() < 2 {
        return points.first().map(&f).unwrap_or(0.0);
    }
    let mut acc = 0.0;
    let mut prev = &points[0];
    let mut f_prev = f(prev);
    for p in &points[1..] {
        let fp = f(p);
        acc += 0.5 * (fp + f_prev) * (p.t - prev.t);
        prev = p;
        f_prev = fp;
    }
    let span = points[points.len() - 1].t - points[0].t;
    acc / span
}

/// Range of the mixing angle over the recorded samples.
pub fn theta_extrema(points: &[TrajectoryPoint]) -> Result<(f64, f64)> {
    let mut lo = PI;
    let mut hi = 0.0f64;
    for p in points {
        let th = mixing_angle(p.omega, p.delta)?;
        lo = lo.min(th);
        hi = hi.max(th);
    }
    Ok((lo, hi))
}

/// Computes the report for a recorded series.
///
/// `points[i].delta` must be the detuning the series was driven with; the
/// macroscopic series of an ensemble carries the `kv = 0` detuning.
pub fn transparency_metrics(
    points: &[TrajectoryPoint],
    pulses: &PulseSequence,
    kv: f64,
    window: &SimWindow,
) -> Result<MetricsReport> {
    let last = points
        .last()
        .ok_or_else(|| Error::invalid("transparency metrics need a non-empty trajectory"))?;
    let avg_omega_v = time_average(points, |p| p.omega * p.state.v);
    let avg_ov_sq = time_average(points, |p| (p.omega * p.state.v).powi(2));
    let avg_omega_sq = time_average(points, |p| p.omega * p.omega);
    let absorptive_index = if avg_omega_sq > 0.0 {
        avg_ov_sq / (avg_omega_sq * avg_omega_sq)
    } else {
        0.0
    };
    let (theta_min, theta_max) = theta_extrema(points)?;
    let theta_last = mixing_angle(last.omega, last.delta)?;
    Ok(MetricsReport {
        w_fin: last.state.w,
        avg_omega_v,
        absorptive_index,
        theta_max,
        theta_min,
        adiabaticity_margin: adiabaticity_margin(pulses, kv, window),
        phi_final: adiabatic_combination(&last.state, theta_last),
        window: [window.t_start, window.t_end],
    })
}
