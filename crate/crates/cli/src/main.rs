use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use asit::commands::{self, CommandOptions, CommandOutput};
use asit::config::RunConfig;
use asit::lambda::Mapping;
use asit::presets::preset;
use asit::verify::VerifyOptions;
use asit::AreaConvention;

#[derive(Parser, Debug)]
#[command(name = "asit", version, about = "Bloch-equation simulations of adiabatic self-induced transparency")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration file.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Built-in figure preset (fig2a ... fig6b, zero).
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Worker threads for ensemble and sweep runs.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output directory; overrides `output.dir` of the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Pulse-area convention; overrides `pulse.convention`.
    #[arg(long, global = true)]
    convention: Option<AreaConvention>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-atom trajectory.
    Simulate,
    /// Doppler-broadened ensemble: macroscopic trajectory, per-velocity finals, metrics.
    Ensemble,
    /// Two-dimensional parameter sweep.
    Sweep,
    /// Analytic and equivalence self-checks.
    Verify {
        /// Seed of the randomized equivalence cases.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of randomized cases.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Multiply the integrator tolerances by this factor.
        #[arg(long, default_value_t = 1.0)]
        loosen: f64,
        /// Exchange U and V in the two-level/three-level mapping (negative control).
        #[arg(long)]
        corrupt_mapping: bool,
    },
    /// Render the SVG for a CSV written by another command.
    Plot { csv: PathBuf },
}

fn load_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    match (&cli.config, &cli.preset) {
        (Some(p), _) => Ok(RunConfig::load(p)?),
        (None, Some(name)) => Ok(preset(name)?),
        (None, None) => bail!("one of --config or --preset is required"),
    }
}

fn options(cli: &Cli, cfg: Option<&RunConfig>) -> CommandOptions {
    let out_dir = cli
        .out
        .clone()
        .or_else(|| cfg.map(RunConfig::output_dir))
        .unwrap_or_else(|| PathBuf::from("out"));
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(usize::from).unwrap_or(1));
    CommandOptions {
        out_dir,
        workers,
        convention: cli.convention,
    }
}

fn report(out: &CommandOutput) {
    println!("{}", out.summary);
    for f in &out.files {
        println!("wrote {}", f.display());
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Simulate => {
            let cfg = load_config(cli)?;
            report(&commands::simulate(&cfg, &options(cli, Some(&cfg)))?);
        }
        Command::Ensemble => {
            let cfg = load_config(cli)?;
            report(&commands::ensemble(&cfg, &options(cli, Some(&cfg)))?);
        }
        Command::Sweep => {
            let cfg = load_config(cli)?;
            report(&commands::sweep(&cfg, &options(cli, Some(&cfg)))?);
        }
        Command::Verify {
            seed,
            cases,
            loosen,
            corrupt_mapping,
        } => {
            if !(*loosen > 0.0) {
                bail!("--loosen must be positive");
            }
            let opts = VerifyOptions {
                seed: *seed,
                cases: *cases,
                loosen: *loosen,
                mapping: if *corrupt_mapping { Mapping::SwapUV } else { Mapping::Standard },
            };
            let (r, text) = commands::verify(&opts)?;
            print!("{text}");
            return Ok(r.all_passed());
        }
        Command::Plot { csv } => {
            let out = options(cli, None).out_dir;
            let dir = if cli.out.is_some() {
                out
            } else {
                csv.parent().map(Path::to_path_buf).unwrap_or_default()
            };
            report(&commands::plot(csv, &dir).with_context(|| format!("plotting {}", csv.display()))?);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
