// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rankstair_cli::commands;
use rankstair_cli::{ConfigError, ExperimentConfig, Report, Setup};

/// Staircase coset coding over rank-metric codes: plans, artifacts,
/// simulations, security checks and bounds.
#[derive(Parser, Debug)]
#[command(name = "rankstair", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides `seed` from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for reports and artifacts.
    #[arg(long, global = true, default_value = "rankstair-out")]
    out: PathBuf,
    /// Configuration override `key=value`; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the staircase plan and write its STC1 descriptor.
    Plan,
    /// Encode a secret (RMX1, or seeded random) into a codeword.
    Encode {
        #[arg(long)]
        secret: Option<PathBuf>,
    },
    /// Decode a received matrix given the transfer matrix.
    Decode {
        #[arg(long)]
        received: PathBuf,
        #[arg(long)]
        transfer: PathBuf,
    },
    /// Monte Carlo trials through the channel.
    Simulate,
    /// Dimension test and exact leakage over observation matrices.
    Security,
    /// Information-rate and communication-overhead bounds.
    Bounds,
    /// Reproduce the worked examples (1: network, 2: storage).
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
}

fn overrides(cli: &Cli) -> Vec<String> {
    let mut o = cli.set.clone();
    if let Some(seed) = cli.seed {
        o.push(format!("seed={seed}"));
    }
    o
}

fn load(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| ConfigError(vec![format!("reading {}: {e}", path.display())]))?,
        None => String::new(),
    };
    ExperimentConfig::from_text(&text, &overrides(cli))
}

fn run(cli: &Cli) -> Result<Report> {
    let config = match &cli.command {
        Command::Example { which } => commands::example_config(*which, &overrides(cli))?,
        _ => load(cli)?,
    };
    let setup = Setup::build(config)?;
    let out = cli.out.as_path();
    match &cli.command {
        Command::Plan => commands::cmd_plan(&setup, Some(out)),
        Command::Encode { secret } => commands::cmd_encode(&setup, secret.as_deref(), out),
        Command::Decode { received, transfer } => commands::cmd_decode(&setup, received, transfer, out),
        Command::Simulate => commands::cmd_simulate(&setup),
        Command::Security => commands::cmd_security(&setup),
        Command::Bounds => commands::cmd_bounds(&setup),
        Command::Example { which } => commands::cmd_example(*which, &setup),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            match e.downcast_ref::<ConfigError>() {
                Some(c) => eprint!("{c}"),
                None => eprintln!("error: {e:#}"),
            }
            return ExitCode::from(2);
        }
    };
    report.timing.wall_clock_ms = start.elapsed().as_millis();
    if let Err(e) = report.write(&cli.out).context("writing report") {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    print!("{}", report.render());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
