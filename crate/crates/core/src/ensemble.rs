//! Maxwell-Boltzmann velocity grid, the Doppler-averaged macroscopic
//! response, and per-velocity scans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_visit, BlochState, MediumParams, SimWindow, TrajectoryPoint};
use crate::error::{Error, Result};
use crate::metrics::{mixing_angle, transparency_metrics, MetricsReport};
use crate::pulse::PulseSequence;

pub const DEFAULT_CLASSES: usize = 801;
pub const SWEEP_CLASSES: usize = 401;
pub const DEFAULT_SPAN: f64 = 4.0;
/// Grid reaches at least this multiple of the largest D-pulse detuning.
pub const DETUNING_COVER: f64 = 1.2;

/// Classes handled per parallel task. Fixed so the reduction order does
/// not depend on the worker count.
const CHUNK: usize = 16;

/// Grid construction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_classes: usize,
    pub span_factor: f64,
    /// Minimum half-range in `kv`; `None` derives it from the pulses.
    #[serde(default)]
    pub extra_cover: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_classes: DEFAULT_CLASSES,
            span_factor: DEFAULT_SPAN,
            extra_cover: None,
        }
    }
}

impl GridSpec {
    pub fn with_classes(n_classes: usize) -> Self {
        GridSpec {
            n_classes,
            ..GridSpec::default()
        }
    }

    pub fn build(&self, doppler_width: f64, pulses: &PulseSequence) -> Result<VelocityGrid> {
        let cover = self
            .extra_cover
            .unwrap_or_else(|| DETUNING_COVER * (pulses.d.offset().abs() + pulses.d.amplitude().abs()));
        build_grid(doppler_width, self.n_classes, self.span_factor, cover)
    }
}

/// Uniform `kv` grid with normalised Maxwell × trapezoid weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityGrid {
    pub shifts: Vec<f64>,
    pub weights: Vec<f64>,
}

impl VelocityGrid {
    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        if self.shifts.len() < 2 {
            0.0
        } else {
            self.shifts[1] - self.shifts[0]
        }
    }
}

/// Symmetric grid over `±max(span_factor · Δω_D, extra_cover)`.
///
/// A zero Doppler width collapses to the single class `kv = 0`.
pub fn build_grid(doppler_width: f64, n_classes: usize, span_factor: f64, extra_cover: f64) -> Result<VelocityGrid> {
    if !(doppler_width >= 0.0) || !doppler_width.is_finite() {
        return Err(Error::invalid(format!("doppler width must be non-negative, got {doppler_width}")));
    }
    if doppler_width == 0.0 {
        return Ok(VelocityGrid {
            shifts: vec![0.0],
            weights: vec![1.0],
        });
    }
    if n_classes < 3 || n_classes % 2 == 0 {
        return Err(Error::invalid(format!("n_classes must be odd and >= 3, got {n_classes}")));
    }
    if !(span_factor > 0.0) || !span_factor.is_finite() || !extra_cover.is_finite() {
        return Err(Error::invalid("span_factor must be positive and extra_cover finite"));
    }
    let half = (span_factor * doppler_width).max(extra_cover.abs());
    let mid = (n_classes / 2) as i64;
    let dk = half / mid as f64;
    let shifts: Vec<f64> = (0..n_classes as i64)
        .map(|i| {
            // Built from the centre outward so the grid is exactly symmetric and contains 0.
            let j = i - mid;
            if j.abs() == mid {
                j.signum() as f64 * half
            } else {
                j as f64 * dk
            }
        })
        .collect();
    let mut weights: Vec<f64> = shifts
        .iter()
        .enumerate()
        .map(|(i, kv)| {
            let trap = if i == 0 || i + 1 == n_classes { 0.5 } else { 1.0 };
            trap * (-(kv / doppler_width).powi(2)).exp()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(VelocityGrid { shifts, weights })
}

/// Outcome of one velocity class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassResult {
    pub kv: f64,
    pub weight: f64,
    pub final_state: BlochState,
    pub theta_max: f64,
    pub theta_min: f64,
    pub adiabaticity_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub classes: Vec<ClassResult>,
    /// Weighted sums of `U, V, W` on the window grid. `delta` is `Δ(t)` at `kv = 0`.
    pub macro_points: Vec<TrajectoryPoint>,
    pub macro_final: BlochState,
    pub metrics: MetricsReport,
    pub window: SimWindow,
}

impl EnsembleResult {
    /// `P(t) = g · Σ w_i V_i(t)`.
    pub fn polarization(&self, gain: f64) -> Vec<f64> {
        self.macro_points.iter().map(|p| gain * p.state.v).collect()
    }
}

struct ChunkOut {
    classes: Vec<ClassResult>,
    acc: Vec<[f64; 3]>,
}

fn run_class(
    pulses: &PulseSequence,
    kv: f64,
    weight: f64,
    medium: &MediumParams,
    window: &SimWindow,
    times: &[f64],
    acc: Option<&mut [[f64; 3]]>,
) -> Result<ClassResult> {
    let omega0 = pulses.em.peak();
    let mut theta_max = 0.0f64;
    let mut theta_min = std::f64::consts::PI;
    let mut min_delta_sq = f64::INFINITY;
    let mut angle_err = None;
    let mut acc = acc;
    let final_state = integrate_visit(BlochState::GROUND, pulses, kv, medium, window, times, |i, t, s| {
        let om = pulses.omega(t);
        let d = pulses.delta(t, kv);
        match mixing_angle(om, d) {
            Ok(th) => {
                theta_max = theta_max.max(th);
                theta_min = theta_min.min(th);
            }
            Err(e) => angle_err = Some(e),
        }
        min_delta_sq = min_delta_sq.min(d * d);
        if let Some(a) = acc.as_deref_mut() {
            a[i][0] += weight * s.u;
            a[i][1] += weight * s.v;
            a[i][2] += weight * s.w;
        }
    })?;
    if let Some(e) = angle_err {
        return Err(e);
    }
    if !final_state.is_finite() {
        return Err(Error::invalid("non-finite final state"));
    }
    Ok(ClassResult {
        kv,
        weight,
        final_state,
        theta_max,
        theta_min,
        adiabaticity_margin: window.duration() * (omega0 * omega0 + min_delta_sq).sqrt(),
    })
}

fn run_chunks(
    pulses: &PulseSequence,
    medium: &MediumParams,
    grid: &VelocityGrid,
    window: &SimWindow,
    times: &[f64],
    accumulate: bool,
) -> Result<Vec<ChunkOut>> {
    pulses.validate()?;
    medium.validate()?;
    window.validate()?;
    if grid.is_empty() || grid.shifts.len() != grid.weights.len() {
        return Err(Error::invalid("velocity grid is empty or inconsistent"));
    }
    let n_chunks = grid.len().div_ceil(CHUNK);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(grid.len());
            let mut acc = if accumulate {
                vec![[0.0; 3]; times.len()]
            } else {
                Vec::new()
            };
            let mut classes = Vec::with_capacity(hi - lo);
            for i in lo..hi {
                let kv = grid.shifts[i];
                let slot = if accumulate { Some(acc.as_mut_slice()) } else { None };
                let r = run_class(pulses, kv, grid.weights[i], medium, window, times, slot).map_err(|e| {
                    Error::VelocityClass {
                        kv,
                        source: Box::new(e),
                    }
                })?;
                classes.push(r);
            }
            Ok(ChunkOut { classes, acc })
        })
        .collect()
}

/// Integrates every class from the ground state and forms the weighted
/// macroscopic response.
///
/// Runs on the current rayon pool. The result is bitwise identical for
/// any pool size.
pub fn run_ensemble(
    pulses: &PulseSequence,
    medium: &MediumParams,
    grid: &VelocityGrid,
    window: &SimWindow,
) -> Result<EnsembleResult> {
    let times = window.sample_times();
    let chunks = run_chunks(pulses, medium, grid, window, &times, true)?;
    let mut acc = vec![[0.0f64; 3]; times.len()];
    let mut classes = Vec::with_capacity(grid.len());
    for ch in chunks {
        for (a, b) in acc.iter_mut().zip(&ch.acc) {
            a[0] += b[0];
            a[1] += b[1];
            a[2] += b[2];
        }
        classes.extend(ch.classes);
    }
    let mut macro_final = [0.0f64; 3];
    for c in &classes {
        macro_final[0] += c.weight * c.final_state.u;
        macro_final[1] += c.weight * c.final_state.v;
        macro_final[2] += c.weight * c.final_state.w;
    }
    let macro_points: Vec<TrajectoryPoint> = times
        .iter()
        .zip(&acc)
        .map(|(&t, a)| TrajectoryPoint {
            t,
            omega: pulses.omega(t),
            delta: pulses.delta(t, 0.0),
            state: BlochState::from_array(*a),
        })
        .collect();
    let mut metrics = transparency_metrics(&macro_points, pulses, 0.0, window)?;
    metrics.w_fin = macro_final[2];
    Ok(EnsembleResult {
        classes,
        macro_points,
        macro_final: BlochState::from_array(macro_final),
        metrics,
        window: *window,
    })
}

/// One row of a per-velocity scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub kv: f64,
    #[serde(rename = "W_fin")]
    pub w_fin: f64,
    pub theta_max: f64,
    pub theta_min: f64,
    pub adiabaticity_margin: f64,
}

/// Final inversion and mixing-angle range of each class, without the
/// macroscopic accumulation.
pub fn per_velocity_scan(
    pulses: &PulseSequence,
    medium: &MediumParams,
    grid: &VelocityGrid,
    window: &SimWindow,
) -> Result<Vec<ScanRow>> {
    let times = window.sample_times();
    let chunks = run_chunks(pulses, medium, grid, window, &times, false)?;
    Ok(chunks
        .into_iter()
        .flat_map(|c| c.classes)
        .map(|c| ScanRow {
            kv: c.kv,
            w_fin: c.final_state.w,
            theta_max: c.theta_max,
            theta_min: c.theta_min,
            adiabaticity_margin: c.adiabaticity_margin,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate_trajectory;
    use crate::pulse::default_window;

    fn sit(om: f64, tau: f64) -> PulseSequence {
        PulseSequence::gaussian(om, tau, 0.0, 0.0, tau, 1.5 * tau)
    }

    #[test]
    fn grid_weights_are_normalised_and_symmetric() {
        let g = build_grid(1000.0, 401, 4.0, 0.0).unwrap();
        assert_eq!(g.len(), 401);
        assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(g.shifts[200], 0.0);
        assert_eq!(g.shifts[0], -4000.0);
        assert_eq!(g.shifts[400], 4000.0);
        for i in 0..401 {
            assert_eq!(g.shifts[i], -g.shifts[400 - i]);
            assert_eq!(g.weights[i], g.weights[400 - i]);
        }
    }

    #[test]
    fn grid_extends_to_cover_large_detuning() {
        let g = build_grid(1000.0, 11, 4.0, 5331.0).unwrap();
        assert_eq!(g.shifts[10], 5331.0);
        let spec = GridSpec::with_classes(11);
        let seq = PulseSequence::gaussian(4442.9, 0.01, 0.0, 4442.9, 0.01, 0.015);
        assert!((spec.build(1000.0, &seq).unwrap().shifts[10] - 1.2 * 4442.9).abs() < 1e-9);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(build_grid(1000.0, 400, 4.0, 0.0).is_err());
        assert!(build_grid(1000.0, 1, 4.0, 0.0).is_err());
        assert!(build_grid(-1.0, 11, 4.0, 0.0).is_err());
        assert!(build_grid(1000.0, 11, 0.0, 0.0).is_err());
        let g = build_grid(0.0, 400, 4.0, 0.0).unwrap();
        assert_eq!((g.shifts.clone(), g.weights.clone()), (vec![0.0], vec![1.0]));
    }

    #[test]
    fn zero_doppler_width_matches_single_atom() {
        let seq = sit(1000.0, 0.01);
        let w = default_window(&seq, 4.0);
        let m = MediumParams::spontaneous(1.0, 0.0);
        let g = build_grid(0.0, 401, 4.0, 0.0).unwrap();
        let e = run_ensemble(&seq, &m, &g, &w).unwrap();
        let single = integrate_trajectory(BlochState::GROUND, &seq, 0.0, &m, &w).unwrap();
        assert_eq!(e.macro_final, single.final_state);
        for (a, b) in e.macro_points.iter().zip(&single.points) {
            assert_eq!(a.state, b.state);
        }
    }

    #[test]
    fn no_drive_leaves_ground_state() {
        let seq = PulseSequence::zero();
        let w = default_window(&seq, 4.0);
        let m = MediumParams::spontaneous(1.0, 1000.0);
        let g = build_grid(1000.0, 41, 4.0, 0.0).unwrap();
        let e = run_ensemble(&seq, &m, &g, &w).unwrap();
        assert!((e.macro_final.w + 1.0).abs() < 1e-12);
        assert_eq!(e.metrics.avg_omega_v, 0.0);
    }

    #[test]
    fn macro_inversion_is_a_convex_combination() {
        let seq = PulseSequence::gaussian(1500.0, 0.01, 0.0, 1500.0, 0.01, 0.015);
        let w = default_window(&seq, 4.0);
        let m = MediumParams::spontaneous(1.0, 1000.0);
        let g = GridSpec::with_classes(61).build(1000.0, &seq).unwrap();
        let e = run_ensemble(&seq, &m, &g, &w).unwrap();
        let lo = e.classes.iter().map(|c| c.final_state.w).fold(f64::INFINITY, f64::min);
        let hi = e.classes.iter().map(|c| c.final_state.w).fold(f64::NEG_INFINITY, f64::max);
        assert!(e.macro_final.w >= lo - 1e-12 && e.macro_final.w <= hi + 1e-12);
        assert!(e.macro_final.w >= -1.0 - 1e-9 && e.macro_final.w <= 1.0 + 1e-9);
        let last = e.macro_points.last().unwrap().state;
        assert!((last.w - e.macro_final.w).abs() < 1e-14);
    }

    #[test]
    fn pure_doppler_profile_is_even_in_kv() {
        let seq = sit(800.0, 0.01);
        let w = default_window(&seq, 4.0);
        let m = MediumParams::spontaneous(1.0, 1000.0);
        let g = build_grid(1000.0, 41, 4.0, 0.0).unwrap();
        let rows = per_velocity_scan(&seq, &m, &g, &w).unwrap();
        let n = rows.len();
        for i in 0..n {
            assert!((rows[i].w_fin - rows[n - 1 - i].w_fin).abs() < 1e-8);
        }
    }

    #[test]
    fn errors_name_the_velocity_class() {
        let seq = sit(1000.0, 0.01);
        let w = default_window(&seq, 4.0);
        let m = MediumParams::spontaneous(1.0, 1000.0);
        let g = build_grid(1000.0, 3, 4.0, 0.0).unwrap();
        let huge = PulseSequence::gaussian(1e300, 0.01, 0.0, 0.0, 0.01, 0.015);
        match run_ensemble(&huge, &m, &g, &w) {
            Err(Error::VelocityClass { kv, .. }) => assert_eq!(kv, -4000.0),
            other => panic!("expected a velocity-class error, got {other:?}"),
        }
    }
}
