use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use linecurve_cli::commands::{self, IntersectArgs, SurfaceInfoArgs, SELFTEST_FLIP_ENV};
use linecurve_cli::{exit_code, Tolerances};

#[derive(Parser)]
#[command(
    name = "linecurve",
    version,
    about = "Convex surfaces, their umbilics and intersection curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convexity and umbilic census of one surface.
    SurfaceInfo {
        config: PathBuf,
        /// Points on the convexity grid.
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        /// Directory for report.json and umbilics.csv; the report goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the intersection of two surfaces and check it.
    Intersect {
        config1: PathBuf,
        config2: PathBuf,
        /// Starting normals as north-chart coordinates `xi1_re,xi1_im,xi2_re,xi2_im`.
        #[arg(long, value_parser = parse_seed, allow_hyphen_values = true)]
        seed: Option<[f64; 4]>,
        /// Predictor step (overrides LINECURVE_TOL_STEP).
        #[arg(long)]
        step: Option<f64>,
        /// Directory for report.json and curve.csv; the report goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the embedded invariant suite.
    Selftest,
}

fn parse_seed(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match <[f64; 4]>::try_from(v) {
        Ok(a) if a.iter().all(|x| x.is_finite()) => Ok(a),
        _ => Err("expected four finite numbers re,im,re,im".into()),
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::SurfaceInfo { config, grid, out } => {
            let tol = Tolerances::from_env()?;
            commands::surface_info(&SurfaceInfoArgs { config, grid, out }, tol)
        }
        Command::Intersect {
            config1,
            config2,
            seed,
            step,
            out,
        } => {
            let mut tol = Tolerances::from_env()?;
            if let Some(h) = step {
                let pairs = [("LINECURVE_TOL_STEP".to_string(), h.to_string())];
                tol = tol.with_overrides(pairs).context("--step")?;
            }
            commands::intersect(
                &IntersectArgs {
                    configs: [config1, config2],
                    seed,
                    out,
                },
                tol,
            )
        }
        Command::Selftest => {
            let conv = commands::flip_hook(std::env::var(SELFTEST_FLIP_ENV).ok().as_deref())?;
            Ok(commands::selftest(&conv))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
