//! `metaplectica` command-line front end.
//!
//! Every subcommand reads an optional JSON config, prints CSV or JSON to
//! stdout (or `--out`), and logs to stderr under `METAPLECTICA_LOG`.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{OpenLoop, RunContext};
use config::{ConfigError, Probe, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "metaplectica", version, about = "Symplectic optics and metaplectic phase experiments")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the number of grid samples.
    #[arg(long, global = true, value_name = "N")]
    grid_n: Option<usize>,
    /// Exact surd arithmetic for `algebra`.
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ray snapshots through an optical system (CSV).
    Trace,
    /// Holonomy sign of a closed loop (JSON).
    Cover,
    /// Apply the lifted system to a probe wavefunction (CSV).
    Propagate {
        #[arg(long, value_enum)]
        probe: Option<Probe>,
    },
    /// Numeric and analytic Gouy phase along the axis (CSV).
    Gouy,
    /// Fringes against a tilted reference before and after focus (CSV).
    Fringe,
    /// Normal form of an algebra expression, optionally its Fock matrix (text or JSON).
    Algebra {
        expression: Option<String>,
        #[arg(long, value_name = "N_MAX")]
        fock: Option<usize>,
    },
    /// Spinor sign under rotor sweeps and recombined-beam intensity (CSV).
    PauliDemo,
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let ctx = RunContext { cfg, seed: cli.seed, grid_n: cli.grid_n, exact: cli.exact };
    match &cli.command {
        Command::Trace => commands::trace(&ctx),
        Command::Cover => commands::cover(&ctx),
        Command::Propagate { probe } => commands::propagate(&ctx, *probe),
        Command::Gouy => commands::gouy(&ctx),
        Command::Fringe => commands::fringe(&ctx),
        Command::Algebra { expression, fock } => commands::algebra(&ctx, expression.clone(), *fock),
        Command::PauliDemo => commands::pauli(&ctx),
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("METAPLECTICA_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| emit(&cli, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = if let Some(open) = e.downcast_ref::<OpenLoop>() {
                if let Err(write_err) = emit(&cli, &(open.report.clone() + "\n")) {
                    eprintln!("error: {write_err:#}");
                }
                3
            } else if e.downcast_ref::<ConfigError>().is_some() {
                2
            } else {
                1
            };
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
