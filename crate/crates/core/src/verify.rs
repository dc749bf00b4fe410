//! Self-check suite: analytic Rabi solution, norm conservation, the
//! two-level/Λ correspondence and STIRAP transfer.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_trajectory, BlochState, MediumParams, SimWindow};
use crate::error::Result;
use crate::lambda::{integrate_lambda, verify_equivalence, GaussianPair, LambdaState, Mapping};
use crate::pulse::{default_window, DPulse, DoubleGaussianDPulse, EmPulse, GaussianEmPulse, PulseSequence};

pub const RABI_THRESHOLD: f64 = 1e-8;
pub const NORM_THRESHOLD: f64 = 1e-8;
pub const EQUIVALENCE_THRESHOLD: f64 = 1e-7;
pub const IMAGINARY_THRESHOLD: f64 = 1e-9;
pub const STIRAP_THRESHOLD: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub cases: usize,
    /// Multiplies the integrator tolerances.
    pub loosen: f64,
    pub mapping: Mapping,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            cases: 100,
            loosen: 1.0,
            mapping: Mapping::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` when `value` must exceed the threshold rather than stay below it.
    pub lower_bound: bool,
    pub passed: bool,
}

impl Check {
    fn below(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            lower_bound: false,
            passed: value < threshold,
        }
    }

    fn above(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            lower_bound: true,
            passed: value > threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn loosened(mut w: SimWindow, factor: f64) -> SimWindow {
    w.rel_tol = (w.rel_tol * factor).min(1e-3);
    w.abs_tol *= factor;
    w
}

/// Constant drive: a Gaussian much wider than the window.
pub fn constant_drive(omega: f64, delta: f64) -> PulseSequence {
    PulseSequence::new(
        EmPulse::Gaussian(GaussianEmPulse {
            omega0: omega,
            tau_omega: 1e9,
            center: 0.0,
        }),
        DPulse::Offset { delta0: delta },
    )
}

/// Max `|W(t) + cos Ωt|` (and of the other components) over `periods` Rabi periods.
pub fn rabi_error(omega: f64, periods: f64, loosen: f64) -> Result<f64> {
    let mut w = SimWindow::new(0.0, periods * 2.0 * PI / omega);
    w.record_stride = 50.0 * omega / (2.0 * PI);
    let w = loosened(w, loosen);
    let tr = integrate_trajectory(BlochState::GROUND, &constant_drive(omega, 0.0), 0.0, &MediumParams::coherent(0.0), &w)?;
    Ok(tr
        .points
        .iter()
        .map(|p| {
            let (s, c) = (omega * p.t).sin_cos();
            (p.state.w + c).abs().max((p.state.v - s).abs()).max(p.state.u.abs())
        })
        .fold(0.0, f64::max))
}

/// One random coherent pulse sequence, Doppler shift and unit initial Bloch vector.
pub fn random_case(rng: &mut impl Rng) -> (PulseSequence, f64, BlochState) {
    let tau = rng.random_range(0.003..0.02);
    let omega0 = rng.random_range(50.0..3000.0);
    let delta_bar = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..3000.0) };
    let delta0 = rng.random_range(-500.0..500.0);
    let d = if delta_bar == 0.0 {
        DPulse::Offset { delta0 }
    } else {
        DPulse::DoubleGaussian(DoubleGaussianDPulse {
            delta0,
            delta_bar,
            tau_delta: tau * rng.random_range(0.7..1.3),
            delta_tau: tau * rng.random_range(1.0..2.0),
        })
    };
    let seq = PulseSequence::new(
        EmPulse::Gaussian(GaussianEmPulse {
            omega0,
            tau_omega: tau,
            center: 0.0,
        }),
        d,
    );
    let kv = rng.random_range(-2000.0..2000.0);
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    (seq, kv, BlochState::new(r * phi.cos(), r * phi.sin(), z))
}

/// Counterintuitive Stokes-then-pump pair and a window covering both.
pub fn stirap_case() -> (GaussianPair, SimWindow) {
    let g = |center| GaussianEmPulse {
        omega0: 200.0,
        tau_omega: 1.0,
        center,
    };
    let mut w = SimWindow::new(-6.0, 6.0);
    w.record_stride = 100.0;
    (
        GaussianPair {
            pump: g(0.7),
            stokes: g(-0.7),
        },
        w,
    )
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    checks.push(Check::below(
        "rabi: max |W + cos(Omega t)| over 10 periods",
        rabi_error(40.0, 10.0, opts.loosen)?,
        RABI_THRESHOLD,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let coherent = MediumParams::coherent(0.0);
    let mut max_norm = 0.0f64;
    let mut max_dev = 0.0f64;
    let mut max_imag = 0.0f64;
    for _ in 0..opts.cases {
        let (seq, kv, init) = random_case(&mut rng);
        let w = loosened(default_window(&seq, 4.0), opts.loosen);
        let tr = integrate_trajectory(init, &seq, kv, &coherent, &w)?;
        for p in &tr.points {
            max_norm = max_norm.max((p.state.norm_sq() - 1.0).abs());
        }
        let rep = verify_equivalence(&seq, kv, &coherent, &w, init, opts.mapping)?;
        max_dev = max_dev.max(rep.max_deviation);
        max_imag = max_imag.max(rep.max_imaginary);
    }
    checks.push(Check::below("norm: max | |B|^2 - 1 | (coherent)", max_norm, NORM_THRESHOLD));
    checks.push(Check::below(
        "equivalence: max |Bloch - mapped Lambda|",
        max_dev,
        EQUIVALENCE_THRESHOLD,
    ));
    checks.push(Check::below("equivalence: max |Im C-bar|", max_imag, IMAGINARY_THRESHOLD));

    let (drive, w) = stirap_case();
    let tr = integrate_lambda(LambdaState::GROUND, &drive, &loosened(w, opts.loosen))?;
    checks.push(Check::above(
        "stirap: final |c3|^2",
        tr.final_state.population(2),
        STIRAP_THRESHOLD,
    ));
    Ok(VerifyReport { checks })
}
