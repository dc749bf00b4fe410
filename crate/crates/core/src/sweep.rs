//! Two-dimensional parameter sweeps of ensemble observables.

use std::collections::HashMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{MediumParams, SimWindow, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use crate::ensemble::{run_ensemble, GridSpec, SWEEP_CLASSES};
use crate::error::{Error, Result};
use crate::metrics::MetricsReport;
use crate::output::content_hash;
use crate::pulse::{area_to_amplitude, default_window, pi_units, AreaConvention, DPulse, EmPulse, GaussianEmPulse, PulseSequence};

pub use crate::units::{rb87_preset, Rb87};

/// Quantity varied along a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Pulse area in units of π.
    Area,
    /// Pulse width `τ_Ω = τ_Δ`.
    Tau,
    DopplerWidth,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Area => "area",
            SweepParam::Tau => "tau",
            SweepParam::DopplerWidth => "doppler_width",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SweepParam::Area => "pulse area / π",
            SweepParam::Tau => "τ (1/γ)",
            SweepParam::DopplerWidth => "Δω_D (γ)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// EM pulse only.
    Sit,
    /// D pulses of the same area and width bracket the EM pulse.
    Asit,
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sit" => Ok(SweepMode::Sit),
            "asit" => Ok(SweepMode::Asit),
            _ => Err(Error::invalid(format!("unknown sweep mode '{s}' (expected sit or asit)"))),
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Sit => "sit",
            SweepMode::Asit => "asit",
        })
    }
}

/// Values held fixed across the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBase {
    /// Area in units of π.
    pub area: f64,
    pub tau: f64,
    pub medium: MediumParams,
    pub convention: AreaConvention,
    pub grid: GridSpec,
    pub padding: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for SweepBase {
    fn default() -> Self {
        SweepBase {
            area: 10.0,
            tau: 0.002,
            medium: MediumParams::spontaneous(1.0, 1000.0),
            convention: AreaConvention::Integral,
            grid: GridSpec::with_classes(SWEEP_CLASSES),
            padding: 4.0,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub x: Axis,
    pub y: Axis,
    pub base: SweepBase,
    pub observables: Vec<String>,
    pub mode: SweepMode,
    /// Cells re-run at `2n − 1` classes to audit grid convergence.
    pub spot_check: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (label, a) in [("x", &self.x), ("y", &self.y)] {
            if a.count < 2 {
                return Err(Error::invalid(format!("{label} axis needs count >= 2")));
            }
            if !a.min.is_finite() || !a.max.is_finite() || a.min == a.max {
                return Err(Error::invalid(format!("{label} axis range must be finite and non-empty")));
            }
        }
        if self.x.param == self.y.param {
            return Err(Error::invalid("sweep axes must vary different parameters"));
        }
        if self.observables.is_empty() {
            return Err(Error::invalid("at least one observable is required"));
        }
        for o in &self.observables {
            if MetricsReport::field_index(o).is_none() {
                return Err(Error::invalid(format!("unknown observable '{o}'")));
            }
        }
        self.base.medium.validate()
    }

    /// Pulses, medium and window of one cell.
    pub fn cell_setup(&self, x: f64, y: f64) -> Result<(PulseSequence, MediumParams, SimWindow)> {
        let mut area = self.base.area;
        let mut tau = self.base.tau;
        let mut medium = self.base.medium;
        for (a, v) in [(&self.x, x), (&self.y, y)] {
            match a.param {
                SweepParam::Area => area = v,
                SweepParam::Tau => tau = v,
                SweepParam::DopplerWidth => medium.doppler_width = v,
            }
        }
        let amp = area_to_amplitude(pi_units(area), tau, self.base.convention)?;
        let asit = PulseSequence::gaussian(amp, tau, 0.0, amp, tau, 1.5 * tau);
        // Both modes share the ASIT window so time averages compare like with like.
        let mut window = default_window(&asit, self.base.padding);
        window.rel_tol = self.base.rel_tol;
        window.abs_tol = self.base.abs_tol;
        let pulses = match self.mode {
            SweepMode::Asit => asit,
            SweepMode::Sit => PulseSequence::new(
                EmPulse::Gaussian(GaussianEmPulse {
                    omega0: amp,
                    tau_omega: tau,
                    center: 0.0,
                }),
                DPulse::Offset { delta0: 0.0 },
            ),
        };
        Ok((pulses, medium, window))
    }

    /// Canonical hash of the sweep definition.
    pub fn hash(&self) -> String {
        content_hash(serde_json::to_string(self).expect("spec serialises").as_bytes())
    }
}

/// Result of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub values: Vec<f64>,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub n_classes: usize,
    /// `(ix, iy)` of the audited cells.
    pub cells: Vec<(usize, usize)>,
    pub max_abs_diff_w_fin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// One row-major `ny × nx` matrix per observable.
    pub matrices: Vec<Vec<f64>>,
    pub converged: Vec<bool>,
    pub errors: Vec<Option<String>>,
    pub provenance: Provenance,
    pub spot_check: Option<SpotCheck>,
    /// Cells taken from the checkpoint instead of being computed.
    pub resumed_cells: usize,
}

impl SweepResult {
    pub fn nx(&self) -> usize {
        self.x_values.len()
    }

    pub fn ny(&self) -> usize {
        self.y_values.len()
    }

    pub fn matrix(&self, observable: &str) -> Option<&[f64]> {
        let i = self.spec.observables.iter().position(|o| o == observable)?;
        Some(&self.matrices[i])
    }

    pub fn value(&self, observable: &str, ix: usize, iy: usize) -> Option<f64> {
        self.matrix(observable).map(|m| m[iy * self.nx() + ix])
    }
}

fn evaluate_cell(spec: &SweepSpec, grid: &GridSpec, x: f64, y: f64) -> CellResult {
    let run = || -> Result<MetricsReport> {
        let (pulses, medium, window) = spec.cell_setup(x, y)?;
        let vg = grid.build(medium.doppler_width, &pulses)?;
        Ok(run_ensemble(&pulses, &medium, &vg, &window)?.metrics)
    };
    match run() {
        Ok(m) => {
            let values: Vec<f64> = spec.observables.iter().map(|o| m.field(o).unwrap_or(f64::NAN)).collect();
            let converged = values.iter().all(|v| v.is_finite());
            CellResult {
                values,
                converged,
                error: None,
            }
        }
        Err(e) => CellResult {
            values: vec![f64::NAN; spec.observables.len()],
            converged: false,
            error: Some(e.to_string()),
        },
    }
}

const CHECKPOINT_TAG: &str = "# asit-sweep-checkpoint";

fn encode_cell(idx: usize, c: &CellResult) -> String {
    let mut s = format!("{idx} {}", u8::from(c.converged));
    for v in &c.values {
        s.push_str(&format!(" {:016x}", v.to_bits()));
    }
    if let Some(e) = &c.error {
        s.push_str(" ! ");
        s.push_str(&e.replace('\n', " "));
    }
    s
}

fn decode_cell(line: &str, n_obs: usize) -> Option<(usize, CellResult)> {
    let (head, error) = match line.split_once(" ! ") {
        Some((h, e)) => (h, Some(e.to_string())),
        None => (line, None),
    };
    let mut it = head.split_ascii_whitespace();
    let idx = it.next()?.parse().ok()?;
    let converged = it.next()? == "1";
    let values: Vec<f64> = it
        .map(|t| {
            (t.len() == 16)
                .then(|| u64::from_str_radix(t, 16).ok())
                .flatten()
                .map(f64::from_bits)
        })
        .collect::<Option<_>>()?;
    (values.len() == n_obs).then_some((
        idx,
        CellResult {
            values,
            converged,
            error,
        },
    ))
}

fn ends_with_newline(path: &Path) -> Result<bool> {
    use std::io::{Read, Seek, SeekFrom};
    let mut f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    f.seek(SeekFrom::End(-1)).map_err(|e| Error::io(path, e))?;
    let mut b = [0u8; 1];
    f.read_exact(&mut b).map_err(|e| Error::io(path, e))?;
    Ok(b[0] == b'\n')
}

/// Completed cells recorded under `hash`. A truncated last line is ignored.
fn load_checkpoint(path: &Path, hash: &str, n_obs: usize, n_cells: usize) -> Result<HashMap<usize, CellResult>> {
    let mut done = HashMap::new();
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut lines = BufReader::new(file).lines();
    let header = match lines.next() {
        Some(l) => l.map_err(|e| Error::io(path, e))?,
        None => return Ok(done),
    };
    if header != format!("{CHECKPOINT_TAG} {hash}") {
        return Err(Error::Config(format!(
            "checkpoint {} belongs to a different sweep; remove it to start over",
            path.display()
        )));
    }
    for line in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if let Some((idx, c)) = decode_cell(&line, n_obs) {
            if idx < n_cells {
                done.insert(idx, c);
            }
        }
    }
    Ok(done)
}

/// Runs every cell on a pool of `workers` threads.
///
/// `workers == 1` executes on one thread; the output does not depend on
/// the value. With a checkpoint path, completed cells are appended as they
/// finish and reused on the next call.
pub fn run_sweep(spec: &SweepSpec, workers: usize, checkpoint: Option<&Path>) -> Result<SweepResult> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let xs = spec.x.values();
    let ys = spec.y.values();
    let nx = xs.len();
    let n_cells = nx * ys.len();
    let n_obs = spec.observables.len();
    let hash = spec.hash();

    let mut done = match checkpoint {
        Some(p) => load_checkpoint(p, &hash, n_obs, n_cells)?,
        None => HashMap::new(),
    };
    let resumed_cells = done.len();
    let writer = match checkpoint {
        Some(p) => {
            let fresh = !p.exists() || std::fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| Error::io(p, e))?;
            if fresh {
                writeln!(f, "{CHECKPOINT_TAG} {hash}").map_err(|e| Error::io(p, e))?;
            } else if !ends_with_newline(p)? {
                // Finish a line cut short by an interrupted run.
                writeln!(f).map_err(|e| Error::io(p, e))?;
            }
            Some(Mutex::new(f))
        }
        None => None,
    };

    let todo: Vec<usize> = (0..n_cells).filter(|i| !done.contains_key(i)).collect();
    let computed: Vec<(usize, CellResult)> = pool.install(|| {
        todo.par_iter()
            .map(|&idx| {
                let c = evaluate_cell(spec, &spec.base.grid, xs[idx % nx], ys[idx / nx]);
                if let (Some(w), Some(p)) = (&writer, checkpoint) {
                    let mut f = w.lock().unwrap_or_else(|e| e.into_inner());
                    writeln!(f, "{}", encode_cell(idx, &c))
                        .and_then(|_| f.flush())
                        .map_err(|e| Error::io(p, e))?;
                }
                Ok((idx, c))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    done.extend(computed);

    let mut matrices = vec![vec![f64::NAN; n_cells]; n_obs];
    let mut converged = vec![false; n_cells];
    let mut errors = vec![None; n_cells];
    for (idx, c) in done {
        for (m, v) in matrices.iter_mut().zip(&c.values) {
            m[idx] = *v;
        }
        converged[idx] = c.converged;
        errors[idx] = c.error;
    }

    let spot_check = if spec.spot_check > 0 {
        let k = spec.spot_check.min(n_cells);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut cells: Vec<usize> = rand::seq::index::sample(&mut rng, n_cells, k).into_vec();
        cells.sort_unstable();
        let fine = GridSpec {
            n_classes: 2 * spec.base.grid.n_classes - 1,
            ..spec.base.grid
        };
        let mut probe = spec.clone();
        probe.observables = vec!["W_fin".into()];
        let coarse_w = spec.observables.iter().position(|o| o == "W_fin");
        let diffs: Vec<f64> = pool.install(|| {
            cells
                .par_iter()
                .map(|&idx| {
                    let f = evaluate_cell(&probe, &fine, xs[idx % nx], ys[idx / nx]).values[0];
                    let c = match coarse_w {
                        Some(j) => matrices[j][idx],
                        None => evaluate_cell(&probe, &spec.base.grid, xs[idx % nx], ys[idx / nx]).values[0],
                    };
                    (f - c).abs()
                })
                .collect()
        });
        Some(SpotCheck {
            n_classes: fine.n_classes,
            cells: cells.iter().map(|&i| (i % nx, i / nx)).collect(),
            max_abs_diff_w_fin: diffs.iter().cloned().fold(0.0, f64::max),
        })
    } else {
        None
    };

    Ok(SweepResult {
        spec: spec.clone(),
        x_values: xs,
        y_values: ys,
        matrices,
        converged,
        errors,
        provenance: Provenance {
            config_hash: hash,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        spot_check,
        resumed_cells,
    })
}
