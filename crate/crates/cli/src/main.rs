//! Command-line entry point: configuration-driven construction and
//! verification of string-built billiard tables and the twist example.

mod config;
mod pipeline;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{RunConfig, TwistConfig};

#[derive(Parser)]
#[command(
    name = "billiard",
    about = "String-constructed billiard tables, their invariant curves of rotation number 1/2, \
             and hyperbolicity certification of 2-periodic orbits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for reports and figures.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Curve sampling grid (overrides the config).
    #[arg(long)]
    grid: Option<usize>,
    /// Also write SVG figures.
    #[arg(long)]
    emit_svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the table, verify its internal identities, export boundary data.
    Table {
        #[command(flatten)]
        common: CommonArgs,
        /// Also dump one billiard orbit: start parameter, angle, step count.
        #[arg(long, value_name = "T,THETA,STEPS")]
        orbit: Option<String>,
    },
    /// Sample the invariant curves and check their invariance residuals.
    Curves {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify every 2-periodic orbit by the three agreeing routes.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The traveling-wave twist example: potential, corners, conservation.
    Twist {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-run the pipeline over scaled perturbation amplitudes and compare
    /// singular-point locations.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load_run_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut config = RunConfig::load(&common.config)?;
    if let Some(grid) = common.grid {
        config.grid = grid;
        config.validate()?;
    }
    Ok(config)
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Table { common, orbit } => {
            let config = load_run_config(&common)?;
            let result = pipeline::run_pipeline(&config, &common.out, common.emit_svg)?;
            if let Some(spec) = orbit {
                let parts: Vec<&str> = spec.split(',').collect();
                anyhow::ensure!(parts.len() == 3, "--orbit wants T,THETA,STEPS");
                let t: f64 = parts[0].trim().parse().context("orbit start parameter")?;
                let theta: f64 = parts[1].trim().parse().context("orbit start angle")?;
                let steps: usize = parts[2].trim().parse().context("orbit step count")?;
                let (table, _) = pipeline::build_table(&config)?;
                pipeline::dump_orbit(
                    &table,
                    billiard_core::billiard::PhasePoint::new(t, theta),
                    steps,
                    &common.out.join("orbit.csv"),
                )?;
            }
            println!(
                "table: {} diameters, {} singular points, residual budget {}",
                result.summary.diameters.len(),
                result.summary.singular_points.len(),
                if result.passed { "met" } else { "violated" }
            );
            for failure in &result.summary.verification.failures {
                eprintln!("check failed: {failure}");
            }
            Ok(result.passed)
        }
        Command::Curves { common } => {
            let config = load_run_config(&common)?;
            let result = pipeline::run_pipeline(&config, &common.out, common.emit_svg)?;
            let r = &result.summary.residuals;
            println!("lambda_plus under T^2:  {:e}", r.lambda_plus_t2);
            println!("lambda_minus under T^2: {:e}", r.lambda_minus_t2);
            println!("spliced max under T:    {:e}", r.spliced_max_t);
            println!("spliced min under T:    {:e}", r.spliced_min_t);
            println!("budget:                 {:e}", r.budget);
            Ok(result.passed)
        }
        Command::Spectrum { common } => {
            let config = load_run_config(&common)?;
            let result = pipeline::run_pipeline(&config, &common.out, common.emit_svg)?;
            for s in &result.summary.spectrum {
                println!(
                    "t0 = {:.9}: {} (trace {:+.6e}, max eigenvalue {:.9})",
                    s.t0,
                    s.class,
                    s.trace,
                    s.eigenvalues[0].abs().max(s.eigenvalues[1].abs())
                );
            }
            if result.summary.full_circle_continuum {
                println!("degenerate continuum: every direction is 2-periodic");
            }
            Ok(result.passed)
        }
        Command::Twist { common } => {
            let config = TwistConfig::load(&common.config)?;
            pipeline::run_twist(&config, &common.out, common.emit_svg)
        }
        Command::Sweep { common } => {
            let config = load_run_config(&common)?;
            pipeline::run_sweep(&config, &common.out, common.emit_svg)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification checks failed; reports were still written");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
