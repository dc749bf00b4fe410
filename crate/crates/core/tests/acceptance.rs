//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p asit-core --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use asit::commands::sweep_table;
use asit::config::{Resolved, RunConfig};
use asit::dynamics::{integrate_trajectory, BlochState, MediumParams, Trajectory};
use asit::ensemble::{per_velocity_scan, run_ensemble, GridSpec};
use asit::lambda::{verify_equivalence, Mapping};
use asit::output::Metadata;
use asit::presets::{preset, PRESETS};
use asit::pulse::{default_window, AreaConvention};
use asit::sweep::{run_sweep, Rb87, SweepResult, SweepSpec};
use asit::verify::{constant_drive, random_case};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

fn workers() -> usize {
    std::thread::available_parallelism().map(usize::from).unwrap_or(1)
}

fn resolved(name: &str) -> Resolved {
    preset(name).unwrap().resolve().unwrap()
}

fn final_w(name: &str) -> f64 {
    let r = resolved(name);
    integrate_trajectory(BlochState::GROUND, &r.pulses, r.kv, &r.medium, &r.window)
        .unwrap()
        .final_state
        .w
}

fn rabi() -> Outcome {
    let start = Instant::now();
    let omega = 40.0;
    let mut w = asit::SimWindow::new(0.0, 10.0 * 2.0 * PI / omega);
    w.record_stride = 100.0 * omega / (2.0 * PI);
    let tr = integrate_trajectory(BlochState::GROUND, &constant_drive(omega, 0.0), 0.0, &MediumParams::coherent(0.0), &w)
        .unwrap();
    let err = tr
        .points
        .iter()
        .map(|p| (p.state.w + (omega * p.t).cos()).abs())
        .fold(0.0, f64::max);
    let el = start.elapsed();
    outcome(
        err < 1e-8 && el < Duration::from_secs(1),
        format!("max |W + cos(Omega t)| = {err:.2e} (< 1e-8) in {}", secs(el)),
    )
}

fn equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let m = MediumParams::coherent(0.0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (seq, kv, init) = random_case(&mut rng);
        let r = verify_equivalence(&seq, kv, &m, &default_window(&seq, 4.0), init, Mapping::Standard).unwrap();
        worst = worst.max(r.max_deviation);
    }
    let el = start.elapsed();
    outcome(
        worst < 1e-7 && el < Duration::from_secs(60),
        format!("100 random sequences, max deviation {worst:.2e} (< 1e-7) in {}", secs(el)),
    )
}

fn homogeneous_sit() -> Outcome {
    let start = Instant::now();
    let w10 = final_w("fig2c");
    let w9 = final_w("fig2a");
    let el = start.elapsed();
    outcome(
        (w10 + 1.0).abs() <= 0.02 && (w9 - 1.0).abs() <= 0.02 && el < Duration::from_secs(10),
        format!(
            "10π W_fin = {w10:.4} (target -1), 9π W_fin = {w9:.4} (target +1), tolerance 0.02, {}",
            secs(el)
        ),
    )
}

fn homogeneous_asit() -> Outcome {
    let start = Instant::now();
    let w9 = final_w("fig2e");
    let w10 = final_w("fig2g");
    let el = start.elapsed();
    outcome(
        (w9 + 1.0).abs() <= 0.02 && (w10 + 1.0).abs() <= 0.02 && el < Duration::from_secs(10),
        format!("9π W_fin = {w9:.4}, 10π W_fin = {w10:.4} (target -1 ± 0.02), {}", secs(el)),
    )
}

/// Midpoint of the kv extent of classes with W_fin > -0.5 on the D-pulse side.
fn band_centre(r: &Resolved) -> Option<f64> {
    let grid = r.grid.build(r.medium.doppler_width, &r.pulses).unwrap();
    let rows = per_velocity_scan(&r.pulses, &r.medium, &grid, &r.window).unwrap();
    let side = r.pulses.d.offset() + r.pulses.d.amplitude();
    let kvs: Vec<f64> = rows
        .iter()
        .filter(|row| row.w_fin > -0.5 && row.kv * side > 0.0)
        .map(|row| row.kv)
        .collect();
    let lo = kvs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = kvs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (!kvs.is_empty()).then(|| 0.5 * (lo + hi))
}

fn band_location() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut centres = Vec::new();
    for name in ["fig3b", "fig3c", "fig3d"] {
        let r = resolved(name);
        let target = r.pulses.d.offset() + r.pulses.d.amplitude();
        match band_centre(&r) {
            Some(c) => {
                let rel = c / target;
                ok &= (rel - 1.0).abs() <= 0.15;
                parts.push(format!("{name}: centre {c:.0} vs {target:.0} ({rel:.3})"));
                centres.push(c.abs());
            }
            None => {
                ok = false;
                parts.push(format!("{name}: no perturbed band"));
            }
        }
    }
    let monotone = centres.len() == 3 && centres.windows(2).all(|w| w[1] > w[0]);
    let el = start.elapsed();
    outcome(
        ok && monotone && el < Duration::from_secs(300),
        format!("{}; outward {monotone}; {}", parts.join(", "), secs(el)),
    )
}

fn point_w_fin(spec: &SweepSpec, area: f64, tau: f64, conv: AreaConvention) -> f64 {
    let mut s = spec.clone();
    s.base.convention = conv;
    s.base.grid = GridSpec::with_classes(801);
    let (pulses, medium, window) = s.cell_setup(area, tau).unwrap();
    let grid = s.base.grid.build(medium.doppler_width, &pulses).unwrap();
    run_ensemble(&pulses, &medium, &grid, &window).unwrap().metrics.w_fin
}

fn spec_of(name: &str) -> SweepSpec {
    preset(name).unwrap().sweep_spec().unwrap()
}

fn point_values() -> Outcome {
    let start = Instant::now();
    let (sit, asit) = (spec_of("fig5a"), spec_of("fig5b"));
    let si = point_w_fin(&sit, 2.0, 0.002, AreaConvention::Integral);
    let ai = point_w_fin(&asit, 10.0, 0.002, AreaConvention::Integral);
    let sc = point_w_fin(&sit, 2.0, 0.002, AreaConvention::Caption);
    let ac = point_w_fin(&asit, 10.0, 0.002, AreaConvention::Caption);
    let el = start.elapsed();
    let integral_ok = (si + 0.973).abs() <= 0.01 && (ai + 0.995).abs() <= 0.01;
    let caption_ok = (sc + 0.973).abs() <= 0.01 && (ac + 0.995).abs() <= 0.01;
    // Sweeps use the integral convention, so that is the one that has to pass.
    outcome(
        integral_ok && sit.base.convention == AreaConvention::Integral && el < Duration::from_secs(480),
        format!(
            "integral: SIT 2π {si:.4} (-0.973), ASIT 10π {ai:.4} (-0.995) -> {integral_ok}; caption: SIT {sc:.4}, ASIT {ac:.4} -> {caption_ok}; {}",
            secs(el)
        ),
    )
}

/// Smallest area `A*` at `iy = 0` such that every cell with area ≥ `A*` lies
/// in the 4-connected `W_fin < -0.99` region containing the largest-area cell.
fn asit_threshold(r: &SweepResult) -> Option<f64> {
    let (nx, ny) = (r.nx(), r.ny());
    let w = r.matrix("W_fin").unwrap();
    let inside = |i: usize| w[i] < -0.99;
    let seed = nx - 1;
    if !inside(seed) {
        return None;
    }
    let mut region = vec![false; nx * ny];
    let mut stack = vec![seed];
    region[seed] = true;
    while let Some(i) = stack.pop() {
        let (ix, iy) = (i % nx, i / nx);
        let mut nb = Vec::with_capacity(4);
        if ix > 0 {
            nb.push(i - 1);
        }
        if ix + 1 < nx {
            nb.push(i + 1);
        }
        if iy > 0 {
            nb.push(i - nx);
        }
        if iy + 1 < ny {
            nb.push(i + nx);
        }
        for j in nb {
            if !region[j] && inside(j) {
                region[j] = true;
                stack.push(j);
            }
        }
    }
    let mut ix = nx - 1;
    while ix > 0 && region[ix - 1] {
        ix -= 1;
    }
    Some(r.x_values[ix])
}

/// Worst stripe minimum near even multiples of π and weakest gap maximum
/// near odd multiples, along `iy = 0`.
fn sit_stripes(r: &SweepResult) -> (f64, f64) {
    let w = r.matrix("W_fin").unwrap();
    let xs = &r.x_values;
    let near = |c: f64| (0..xs.len()).filter(move |&i| (xs[i] - c).abs() <= 0.5);
    let max_area = xs[xs.len() - 1];
    let mut worst_min = f64::NEG_INFINITY;
    let mut weakest_gap = f64::INFINITY;
    let mut k = 1.0;
    while 2.0 * k <= max_area + 1e-9 {
        let m = near(2.0 * k).map(|i| w[i]).fold(f64::INFINITY, f64::min);
        worst_min = worst_min.max(m);
        let g = near(2.0 * k - 1.0).map(|i| w[i]).fold(f64::NEG_INFINITY, f64::max);
        weakest_gap = weakest_gap.min(g);
        k += 1.0;
    }
    (worst_min, weakest_gap)
}

fn fig5_structure(sit: &SweepResult, asit: &SweepResult, run_time: Duration, smoke_time: Duration) -> Outcome {
    let threshold = asit_threshold(asit);
    let first = {
        let w = asit.matrix("W_fin").unwrap();
        (0..asit.nx()).find(|&i| w[i] < -0.99).map(|i| asit.x_values[i])
    };
    let asit_ok = threshold.is_some_and(|a| a <= 5.0);

    let (stripe_min, gap_max) = sit_stripes(sit);
    let stripes_ok = stripe_min < -0.9 && gap_max > -0.5;

    let (ws, wa) = (sit.matrix("W_fin").unwrap(), asit.matrix("W_fin").unwrap());
    let (is, ia) = (
        sit.matrix("absorptive_index").unwrap(),
        asit.matrix("absorptive_index").unwrap(),
    );
    let common: Vec<usize> = (0..ws.len()).filter(|&i| ws[i] < -0.9 && wa[i] < -0.9).collect();
    let smaller = common.iter().filter(|&&i| ia[i] < is[i]).count();
    let frac = smaller as f64 / common.len().max(1) as f64;
    let index_ok = common.len() >= 10 && frac >= 0.9;

    let time_ok = run_time < Duration::from_secs(7200) && smoke_time < Duration::from_secs(600);
    outcome(
        asit_ok && stripes_ok && index_ok && time_ok,
        format!(
            "ASIT W<-0.99 region at tau=2e-3: contiguous from {}π (first {}π, need <= 5π) -> {asit_ok}; \
             SIT stripes: worst minimum near 2kπ {stripe_min:.4} (< -0.9), weakest gap near (2k-1)π {gap_max:.4} (> -0.5) -> {stripes_ok}; \
             absorptive index ASIT < SIT in {smaller}/{} common transparent cells ({:.1}%, need 90%) -> {index_ok}; \
             60x60 pair {} (< 2 h), 20x20 pair {} (< 10 min) on {} workers",
            threshold.map_or("-".into(), |a| format!("{a:.1}")),
            first.map_or("-".into(), |a| format!("{a:.1}")),
            common.len(),
            100.0 * frac,
            secs(run_time),
            secs(smoke_time),
            workers()
        ),
    )
}

fn rb87_feasibility() -> Outcome {
    let start = Instant::now();
    let spec = spec_of("fig6a");
    let dw = Rb87::default().doppler_width_300k;
    let areas = spec.x.values();
    let w: Vec<f64> = areas
        .iter()
        .map(|&a| {
            let (pulses, medium, window) = spec.cell_setup(a, dw).unwrap();
            let grid = spec.base.grid.build(medium.doppler_width, &pulses).unwrap();
            run_ensemble(&pulses, &medium, &grid, &window).unwrap().metrics.w_fin
        })
        .collect();
    let large: Vec<f64> = areas.iter().zip(&w).filter(|(a, _)| **a >= 10.0).map(|(_, w)| *w).collect();
    let large_mean = large.iter().sum::<f64>() / large.len() as f64;
    // Area at which the D-pulse amplitude is closest to the Doppler width.
    let mismatch = |a: f64| (spec.cell_setup(a, dw).unwrap().0.d.amplitude() - dw).abs();
    let i_match = (0..areas.len())
        .min_by(|&i, &j| mismatch(areas[i]).total_cmp(&mismatch(areas[j])))
        .unwrap();
    let (amp_area, w_match) = (areas[i_match], w[i_match]);
    let rb = Rb87::default();
    let ns = rb.time_unit() * 1e9;
    let pulse_ns = rb.to_seconds(spec.base.tau) * 1e9;
    let el = start.elapsed();
    let approach = large_mean < -0.98;
    let degrade = w_match >= large_mean + 0.1;
    let units = (ns - 27.0).abs() / 27.0 < 0.05;
    outcome(
        approach && degrade && units && el < Duration::from_secs(1800),
        format!(
            "mean W_fin over areas >= 10π {large_mean:.4} (< -0.98); W_fin {w_match:.4} at {amp_area:.1}π where D amplitude ≈ Doppler width (>= mean + 0.1); \
             1/gamma = {ns:.2} ns, tau = {pulse_ns:.3} ns; {}",
            secs(el)
        ),
    )
}

fn sweep_bits(r: &SweepResult) -> (Vec<u64>, Vec<u8>) {
    let bits = r.matrices.iter().flatten().map(|v| v.to_bits()).collect();
    let csv = sweep_table(r, Metadata::for_config(&r.spec).unwrap()).body().unwrap();
    (bits, csv)
}

fn determinism(runs_1: &[SweepResult], smoke: &[SweepSpec]) -> Outcome {
    let n = workers().max(4);
    let mut same = true;
    for (r1, spec) in runs_1.iter().zip(smoke) {
        let rn = run_sweep(spec, n, None).unwrap();
        same &= sweep_bits(r1) == sweep_bits(&rn) && r1.spot_check == rn.spot_check;
    }
    outcome(same, format!("20x20 SIT and ASIT sweeps with 1 and {n} workers bit-identical: {same}"))
}

fn norm_suite() -> Outcome {
    let start = Instant::now();
    let mut worst_coherent = 0.0f64;
    let mut worst_relaxed = f64::NEG_INFINITY;
    let mut check = |tr: &Trajectory, coherent: bool| {
        for p in &tr.points {
            let n = p.state.norm_sq();
            if coherent {
                worst_coherent = worst_coherent.max((n - 1.0).abs());
            } else {
                worst_relaxed = worst_relaxed.max(n - 1.0);
            }
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (seq, kv, init) = random_case(&mut rng);
        let tr = integrate_trajectory(init, &seq, kv, &MediumParams::coherent(0.0), &default_window(&seq, 4.0)).unwrap();
        check(&tr, true);
    }
    let mut cases = Vec::new();
    for (name, _) in PRESETS {
        let cfg: RunConfig = preset(name).unwrap();
        if cfg.sweep.is_some() {
            let spec = cfg.sweep_spec().unwrap();
            let (xs, ys) = (spec.x.values(), spec.y.values());
            for (x, y) in [
                (xs[0], ys[0]),
                (xs[xs.len() - 1], ys[0]),
                (xs[0], ys[ys.len() - 1]),
                (xs[xs.len() - 1], ys[ys.len() - 1]),
                (xs[xs.len() / 2], ys[ys.len() / 2]),
            ] {
                let (p, m, w) = spec.cell_setup(x, y).unwrap();
                let g = spec.base.grid.build(m.doppler_width, &p).unwrap();
                cases.push((p, m, w, g));
            }
        } else {
            let r = cfg.resolve().unwrap();
            let g = r.grid.build(r.medium.doppler_width, &r.pulses).unwrap();
            cases.push((r.pulses, r.medium, r.window, g));
        }
    }
    let n_cases = cases.len();
    for (p, m, w, g) in &cases {
        let coherent = MediumParams {
            gamma: 0.0,
            big_gamma: 0.0,
            ..*m
        };
        for &kv in &g.shifts {
            check(&integrate_trajectory(BlochState::GROUND, p, kv, m, w).unwrap(), false);
            check(&integrate_trajectory(BlochState::GROUND, p, kv, &coherent, w).unwrap(), true);
        }
    }
    let el = start.elapsed();
    outcome(
        worst_coherent < 1e-8 && worst_relaxed <= 1e-6 && el < Duration::from_secs(300),
        format!(
            "coherent max | |B|^2 - 1 | = {worst_coherent:.2e} (< 1e-8); relaxed max |B|^2 - 1 = {worst_relaxed:.2e} (<= 1e-6); \
             {n_cases} preset cases, every velocity class; {}",
            secs(el)
        ),
    )
}

fn smoke_spec(name: &str) -> SweepSpec {
    let mut s = spec_of(name);
    s.x.count = 20;
    s.y.count = 20;
    s
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; none apply here.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let wanted = |n: u32| filter.as_ref().is_none_or(|f| f == &n.to_string());
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |n: u32, title: &'static str, o: Outcome| {
        println!("{} criterion {n} ({title}): {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, title, o));
    };

    if wanted(1) {
        record(1, "analytic Rabi oracle", rabi());
    }
    if wanted(2) {
        record(2, "two-level / Lambda equivalence", equivalence());
    }
    if wanted(3) {
        record(3, "homogeneous SIT and SIA", homogeneous_sit());
    }
    if wanted(4) {
        record(4, "homogeneous ASIT", homogeneous_asit());
    }
    if wanted(5) {
        record(5, "nonadiabatic band location", band_location());
    }
    if wanted(6) {
        record(6, "point values", point_values());
    }
    if wanted(7) || wanted(9) {
        let smoke = [smoke_spec("fig5a"), smoke_spec("fig5b")];
        let t = Instant::now();
        let smoke_runs: Vec<SweepResult> = smoke.iter().map(|s| run_sweep(s, workers(), None).unwrap()).collect();
        let smoke_time = t.elapsed();
        if wanted(7) {
            let t = Instant::now();
            let sit = run_sweep(&spec_of("fig5a"), workers(), None).unwrap();
            let asit = run_sweep(&spec_of("fig5b"), workers(), None).unwrap();
            let run_time = t.elapsed();
            record(7, "sweep structure", fig5_structure(&sit, &asit, run_time, smoke_time));
        }
        if wanted(9) {
            let ones: Vec<SweepResult> = if workers() == 1 {
                smoke_runs
            } else {
                smoke.iter().map(|s| run_sweep(s, 1, None).unwrap()).collect()
            };
            record(9, "determinism", determinism(&ones, &smoke));
        }
    }
    if wanted(8) {
        record(8, "Rb-87 feasibility", rb87_feasibility());
    }
    if wanted(10) {
        record(10, "norm and physicality", norm_suite());
    }

    results.sort_by_key(|r| r.0);
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.2.passed)
        .map(|r| format!("{} ({})", r.0, r.1))
        .collect();
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
