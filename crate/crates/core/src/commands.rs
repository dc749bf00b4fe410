//! The `simulate`, `ensemble`, `sweep`, `verify` and `plot` commands.
//!
//! Each command writes its files under an output directory and returns the
//! list of paths plus a short human-readable summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Resolved, RunConfig};
use crate::dynamics::{integrate_trajectory, BlochState, TrajectoryPoint};
use crate::ensemble::{run_ensemble, EnsembleResult};
use crate::error::{Error, Result};
use crate::metrics::{MetricsReport, ScaledMetrics};
use crate::output::{out_path, write_json, write_text, CsvTable, Metadata};
use crate::plot::{heatmap, line_plot, Series};
use crate::pulse::AreaConvention;
use crate::sweep::{run_sweep, SpotCheck, SweepResult, SweepSpec};
use crate::verify::{run_verify, VerifyOptions, VerifyReport};

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOptions {
    pub out_dir: PathBuf,
    pub workers: usize,
    /// Replaces `pulse.convention` of the config when set.
    pub convention: Option<AreaConvention>,
}

impl CommandOptions {
    pub fn new(out_dir: impl Into<PathBuf>, workers: usize) -> Self {
        CommandOptions {
            out_dir: out_dir.into(),
            workers,
            convention: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn with_overrides(cfg: &RunConfig, opts: &CommandOptions) -> RunConfig {
    let mut cfg = cfg.clone();
    if let Some(c) = opts.convention {
        cfg.pulse.convention = Some(c);
    }
    cfg
}

fn name(prefix: &str, base: &str) -> String {
    if prefix.is_empty() {
        base.to_string()
    } else {
        format!("{prefix}_{base}")
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))
}

pub const TRAJECTORY_COLUMNS: [&str; 6] = ["t", "omega", "delta", "U", "V", "W"];
pub const PER_VELOCITY_COLUMNS: [&str; 8] = [
    "kv",
    "weight",
    "U_fin",
    "V_fin",
    "W_fin",
    "theta_max",
    "theta_min",
    "adiabaticity_margin",
];

fn trajectory_table(points: &[TrajectoryPoint], meta: Metadata) -> CsvTable {
    let mut t = CsvTable::new(
        TRAJECTORY_COLUMNS.iter().map(|s| s.to_string()).collect(),
        points
            .iter()
            .map(|p| vec![p.t, p.omega, p.delta, p.state.u, p.state.v, p.state.w])
            .collect(),
    );
    t.meta = meta;
    t
}

fn bloch_plot(title: &str, table: &CsvTable) -> String {
    let t = table.column("t").unwrap_or_default();
    let cols: Vec<(&str, Vec<f64>)> = ["U", "V", "W"]
        .iter()
        .map(|c| (*c, table.column(c).unwrap_or_default()))
        .collect();
    let series: Vec<Series<'_>> = cols
        .iter()
        .map(|(label, y)| Series { label, x: &t, y })
        .collect();
    line_plot(title, "t [1/gamma]", "Bloch components", &series)
}

fn per_velocity_plot(title: &str, table: &CsvTable) -> String {
    let kv = table.column("kv").unwrap_or_default();
    let w = table.column("W_fin").unwrap_or_default();
    let th = table.column("theta_max").unwrap_or_default();
    line_plot(
        title,
        "kv [gamma]",
        "W_fin, theta_max [rad]",
        &[
            Series {
                label: "W_fin",
                x: &kv,
                y: &w,
            },
            Series {
                label: "theta_max",
                x: &kv,
                y: &th,
            },
        ],
    )
}

/// Single-atom trajectory at the configured `run.kv`.
pub fn simulate(cfg: &RunConfig, opts: &CommandOptions) -> Result<CommandOutput> {
    let cfg = with_overrides(cfg, opts);
    let r = cfg.resolve()?;
    let tr = integrate_trajectory(BlochState::GROUND, &r.pulses, r.kv, &r.medium, &r.window)?;
    let table = trajectory_table(&tr.points, Metadata::for_config(&r)?);
    let prefix = cfg.prefix();
    let csv = out_path(&opts.out_dir, &name(&prefix, "trajectory.csv"));
    table.write(&csv)?;
    let mut files = vec![csv];
    if r.svg {
        let svg = out_path(&opts.out_dir, &name(&prefix, "trajectory.svg"));
        write_text(&svg, &bloch_plot(&format!("trajectory, kv = {}", r.kv), &table))?;
        files.push(svg);
    }
    let f = tr.final_state;
    Ok(CommandOutput {
        files,
        summary: format!("final state U = {:.6}, V = {:.6}, W = {:.6}", f.u, f.v, f.w),
    })
}

#[derive(Debug, Clone, Serialize)]
struct EnsembleSummary<'a> {
    metrics: &'a MetricsReport,
    scaled: ScaledMetrics,
    macro_final: BlochState,
    n_classes: usize,
}

/// Runs the resolved config through the ensemble on `workers` threads.
pub fn run_configured_ensemble(r: &Resolved, workers: usize) -> Result<EnsembleResult> {
    let grid = r.grid.build(r.medium.doppler_width, &r.pulses)?;
    pool(workers)?.install(|| run_ensemble(&r.pulses, &r.medium, &grid, &r.window))
}

/// Doppler-averaged macroscopic trajectory, per-velocity finals and metrics.
pub fn ensemble(cfg: &RunConfig, opts: &CommandOptions) -> Result<CommandOutput> {
    let cfg = with_overrides(cfg, opts);
    let r = cfg.resolve()?;
    let res = run_configured_ensemble(&r, opts.workers)?;
    let meta = Metadata::for_config(&r)?;
    let prefix = cfg.prefix();
    let mut files = Vec::new();

    let macro_table = trajectory_table(&res.macro_points, meta.clone());
    let p = out_path(&opts.out_dir, &name(&prefix, "macro.csv"));
    macro_table.write(&p)?;
    files.push(p);

    let mut pv = CsvTable::new(
        PER_VELOCITY_COLUMNS.iter().map(|s| s.to_string()).collect(),
        res.classes
            .iter()
            .map(|c| {
                vec![
                    c.kv,
                    c.weight,
                    c.final_state.u,
                    c.final_state.v,
                    c.final_state.w,
                    c.theta_max,
                    c.theta_min,
                    c.adiabaticity_margin,
                ]
            })
            .collect(),
    );
    pv.meta = meta.clone();
    let p = out_path(&opts.out_dir, &name(&prefix, "per_velocity.csv"));
    pv.write(&p)?;
    files.push(p);

    let summary = EnsembleSummary {
        metrics: &res.metrics,
        scaled: res.metrics.scaled(r.medium.gain),
        macro_final: res.macro_final,
        n_classes: res.classes.len(),
    };
    let p = out_path(&opts.out_dir, &name(&prefix, "metrics.json"));
    write_json(&p, &meta, &summary)?;
    files.push(p);

    if r.svg {
        let p = out_path(&opts.out_dir, &name(&prefix, "macro.svg"));
        write_text(&p, &bloch_plot("macroscopic response", &macro_table))?;
        files.push(p);
        let p = out_path(&opts.out_dir, &name(&prefix, "per_velocity.svg"));
        write_text(&p, &per_velocity_plot("per-velocity final inversion", &pv))?;
        files.push(p);
    }
    let m = &res.metrics;
    Ok(CommandOutput {
        files,
        summary: format!(
            "{} classes: W_fin = {:.6}, absorptive_index = {:.6e}, avg_omega_v = {:.6e}",
            res.classes.len(),
            m.w_fin,
            m.absorptive_index,
            m.avg_omega_v
        ),
    })
}

/// Long-form sweep table: axis values, observables, convergence flag.
pub fn sweep_table(res: &SweepResult, meta: Metadata) -> CsvTable {
    let mut header = vec![res.spec.x.param.name().to_string(), res.spec.y.param.name().to_string()];
    header.extend(res.spec.observables.iter().cloned());
    header.push("converged".into());
    let nx = res.nx();
    let mut rows = Vec::with_capacity(nx * res.ny());
    for (iy, &y) in res.y_values.iter().enumerate() {
        for (ix, &x) in res.x_values.iter().enumerate() {
            let idx = iy * nx + ix;
            let mut row = vec![x, y];
            row.extend(res.matrices.iter().map(|m| m[idx]));
            row.push(if res.converged[idx] { 1.0 } else { 0.0 });
            rows.push(row);
        }
    }
    let mut t = CsvTable::new(header, rows);
    t.meta = meta;
    t
}

#[derive(Debug, Clone, Serialize)]
struct SweepSummary<'a> {
    provenance: &'a crate::sweep::Provenance,
    spot_check: &'a Option<SpotCheck>,
    resumed_cells: usize,
    nx: usize,
    ny: usize,
    failed_cells: Vec<FailedCell>,
}

#[derive(Debug, Clone, Serialize)]
struct FailedCell {
    ix: usize,
    iy: usize,
    error: Option<String>,
}

/// Sweep with a checkpoint in the output directory, so an interrupted run
/// resumes where it stopped.
pub fn sweep(cfg: &RunConfig, opts: &CommandOptions) -> Result<CommandOutput> {
    let cfg = with_overrides(cfg, opts);
    let spec: SweepSpec = cfg.sweep_spec()?;
    let prefix = cfg.prefix();
    let ckpt = out_path(&opts.out_dir, &name(&prefix, "sweep.ckpt"));
    std::fs::create_dir_all(&opts.out_dir).map_err(|e| Error::io(&opts.out_dir, e))?;
    let res = run_sweep(&spec, opts.workers, Some(&ckpt))?;
    let meta = Metadata::for_config(&spec)?;
    let mut files = Vec::new();

    let table = sweep_table(&res, meta.clone());
    let p = out_path(&opts.out_dir, &name(&prefix, "sweep.csv"));
    table.write(&p)?;
    files.push(p);

    if cfg.output.svg.unwrap_or(true) {
        for (obs, m) in spec.observables.iter().zip(&res.matrices) {
            let p = out_path(&opts.out_dir, &name(&prefix, &format!("sweep_{obs}.svg")));
            write_text(
                &p,
                &heatmap(
                    &format!("{obs} ({})", spec.mode),
                    spec.x.param.label(),
                    spec.y.param.label(),
                    &res.x_values,
                    &res.y_values,
                    m,
                ),
            )?;
            files.push(p);
        }
    }

    let nx = res.nx();
    let failed_cells: Vec<FailedCell> = res
        .converged
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| FailedCell {
            ix: i % nx,
            iy: i / nx,
            error: res.errors[i].clone(),
        })
        .collect();
    let n_failed = failed_cells.len();
    let summary = SweepSummary {
        provenance: &res.provenance,
        spot_check: &res.spot_check,
        resumed_cells: res.resumed_cells,
        nx,
        ny: res.ny(),
        failed_cells,
    };
    let p = out_path(&opts.out_dir, &name(&prefix, "sweep.json"));
    write_json(&p, &meta, &summary)?;
    files.push(p);
    files.push(ckpt);

    let mut text = format!(
        "{} x {} cells ({} resumed, {} failed)",
        nx,
        res.ny(),
        res.resumed_cells,
        n_failed
    );
    if let Some(sc) = &res.spot_check {
        let _ = write!(
            text,
            "; spot check at {} classes: max |dW_fin| = {:.3e}",
            sc.n_classes, sc.max_abs_diff_w_fin
        );
    }
    Ok(CommandOutput { files, summary: text })
}

/// One line per check.
pub fn format_verify(report: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{} {}: {:.3e} {} {:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            if c.lower_bound { ">" } else { "<" },
            c.threshold
        );
    }
    s
}

pub fn verify(opts: &VerifyOptions) -> Result<(VerifyReport, String)> {
    let r = run_verify(opts)?;
    let text = format_verify(&r);
    Ok((r, text))
}

/// Kind of a CSV file written by one of the commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Trajectory,
    PerVelocity,
    Sweep,
}

pub fn detect_kind(table: &CsvTable) -> Result<CsvKind> {
    let h: Vec<&str> = table.header.iter().map(String::as_str).collect();
    if h == TRAJECTORY_COLUMNS {
        Ok(CsvKind::Trajectory)
    } else if h == PER_VELOCITY_COLUMNS {
        Ok(CsvKind::PerVelocity)
    } else if h.len() >= 4 && h.last() == Some(&"converged") {
        Ok(CsvKind::Sweep)
    } else {
        Err(Error::invalid(format!("unrecognised CSV header: {}", h.join(","))))
    }
}

/// Distinct values in order of first appearance.
fn distinct(v: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &x in v {
        if !out.iter().any(|o| o.to_bits() == x.to_bits()) {
            out.push(x);
        }
    }
    out
}

/// Re-renders the SVG for a CSV written by `simulate`, `ensemble` or `sweep`.
pub fn plot(csv: &Path, out_dir: &Path) -> Result<CommandOutput> {
    let table = CsvTable::read(csv)?;
    let stem = csv
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("plot")
        .to_string();
    let mut files = Vec::new();
    let kind = detect_kind(&table)?;
    match kind {
        CsvKind::Trajectory => {
            let p = out_path(out_dir, &format!("{stem}.svg"));
            write_text(&p, &bloch_plot(&stem, &table))?;
            files.push(p);
        }
        CsvKind::PerVelocity => {
            let p = out_path(out_dir, &format!("{stem}.svg"));
            write_text(&p, &per_velocity_plot(&stem, &table))?;
            files.push(p);
        }
        CsvKind::Sweep => {
            let xcol: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
            let ycol: Vec<f64> = table.rows.iter().map(|r| r[1]).collect();
            let (xs, ys) = (distinct(&xcol), distinct(&ycol));
            if xs.len() * ys.len() != table.rows.len() {
                return Err(Error::Parse {
                    path: csv.to_path_buf(),
                    message: "sweep rows do not form a complete grid".into(),
                });
            }
            let n_obs = table.header.len() - 3;
            for j in 0..n_obs {
                let obs = &table.header[2 + j];
                let mut m = vec![f64::NAN; xs.len() * ys.len()];
                for r in &table.rows {
                    let ix = xs.iter().position(|x| x.to_bits() == r[0].to_bits()).unwrap_or(0);
                    let iy = ys.iter().position(|y| y.to_bits() == r[1].to_bits()).unwrap_or(0);
                    m[iy * xs.len() + ix] = r[2 + j];
                }
                let p = out_path(out_dir, &format!("{stem}_{obs}.svg"));
                write_text(&p, &heatmap(obs, &table.header[0], &table.header[1], &xs, &ys, &m))?;
                files.push(p);
            }
        }
    }
    Ok(CommandOutput {
        summary: format!("{kind:?} file, {} rows", table.rows.len()),
        files,
    })
}
