use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wqed::scattering::PulseShape;
use wqed_cli::config::Format;
use wqed_cli::{resolve_config, run, Command, Overrides};

#[derive(Clone, Copy, clap::ValueEnum)]
enum Pulse {
    Lorentzian,
    Delta,
}

/// Two-photon scattering maps for a quasiperiodic Bose-Hubbard chain between two waveguides.
#[derive(Parser)]
#[command(name = "wqed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pulse: Option<Pulse>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        out: cli.out,
        workers: cli.workers,
        pulse: cli.pulse.map(|p| match p {
            Pulse::Lorentzian => PulseShape::Lorentzian,
            Pulse::Delta => PulseShape::Delta,
        }),
        format: cli.format,
    };
    let outcome = resolve_config(cli.config.as_deref(), &overrides).and_then(|config| run(cli.command, &config));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wqed {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
