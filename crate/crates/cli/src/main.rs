use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use stverify::report::{self, Mode, RunConfig};
use stverify::verifier::{self, Discretization};

/// Computer-assisted existence proofs for u_t - nu u_xx = g(u) on (0,1).
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides `out` in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Spatial degree of the reference solution.
    #[arg(long, global = true, value_parser = ["3", "5"])]
    px: Option<String>,

    /// Number of steps (overrides `steps` in the config).
    #[arg(long, global = true)]
    steps: Option<usize>,

    /// Suppress per-step progress.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Compute the projection constants only.
    Constants,
    /// Run the step-by-step verification.
    Verify,
    /// Sample the approximate solution on a grid.
    Reference,
}

enum Outcome {
    Done,
    Unverified,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_ref().context("missing --config")?;
    let mut cfg = report::load_config(path)?;
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(px) = &cli.px {
        cfg.reference.px = px.parse()?;
    }
    if let Some(steps) = cli.steps {
        cfg.steps = steps;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = load(cli)?;
    let problem = cfg.problem()?;
    let mode = match cli.command {
        Some(Command::Constants) => Mode::Constants,
        Some(Command::Verify) => Mode::Verify,
        Some(Command::Reference) => Mode::Reference,
        None => cfg.mode,
    };
    match mode {
        Mode::Constants => {
            let disc = Discretization::new(&problem)?;
            report::write_constants(&disc.constants, &cfg.out)?;
            if !cli.quiet {
                for (name, v) in disc.constants.named() {
                    println!("{name:>9} {}", report::fmt_upper(v.hi()));
                }
            }
            Ok(Outcome::Done)
        }
        Mode::Reference => {
            report::write_contour(&problem, 50, 20, &cfg.out)?;
            Ok(Outcome::Done)
        }
        Mode::Verify => {
            if !cli.quiet {
                println!("{}", report::STEPS_HEADER);
            }
            let rep = verifier::run_with(&problem, |s| {
                if !cli.quiet {
                    println!("{}", report::step_row(s));
                }
            })?;
            report::emit_csv(&rep, &cfg.out)?;
            report::write_config_echo(&cfg, &cfg.out)?;
            if !cli.quiet {
                println!("{rep}");
            }
            Ok(if rep.verified() { Outcome::Done } else { Outcome::Unverified })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Unverified) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
