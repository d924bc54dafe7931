//! Configuration, dispatch and file output for the `wqed` command.

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use thiserror::Error;

use config::{Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("compute failure: {0}")]
    Compute(String),
    #[error("output error: {0}")]
    Io(String),
    #[error("verification failed: {}", .0.join(", "))]
    Verification(Vec<String>),
}

impl CliError {
    pub(crate) fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Compute(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Closed and effective eigenvalues of the one- and two-particle sectors.
    Spectrum,
    /// Path-averaged two-photon transmission over (h/J, alpha).
    T2Map,
    /// log_{d2} of the participation ratio over (h/J, alpha).
    PrMap,
    /// Transmission for identical-momentum photon pairs over (h/J, alpha).
    T2cohMap,
    /// log_{d2} R and 1/Lambda_2 against h/J for several chain lengths.
    Scaling,
    /// Transmission maps for each loss rate.
    LossMap,
    /// Strong-interaction doublon model against exact diagonalization.
    SwCheck,
    /// Oracle suites on a small chain.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::T2Map => "t2-map",
            Command::PrMap => "pr-map",
            Command::T2cohMap => "t2coh-map",
            Command::Scaling => "scaling",
            Command::LossMap => "loss-map",
            Command::SwCheck => "sw-check",
            Command::Verify => "verify",
        }
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub pulse: Option<wqed::scattering::PulseShape>,
    pub format: Option<Format>,
}

pub fn resolve_config(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut config = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &overrides.out {
        config.output.path = Some(out.clone());
    }
    if overrides.workers.is_some() {
        config.workers = overrides.workers;
    }
    if let Some(pulse) = overrides.pulse {
        config.mode.pulse = pulse;
    }
    if let Some(format) = overrides.format {
        config.output.format = format;
    }
    config.validate()?;
    Ok(config)
}

/// `<stem>.<suffix>.<ext>` next to `path`.
fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{suffix}"),
    };
    path.with_file_name(name)
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(CliError::io)
        }
    }
}

/// Runs one command and writes its output. Without an output path the main
/// document goes to stdout and sibling tables are skipped.
pub fn run(command: Command, config: &RunConfig) -> Result<(), CliError> {
    let rendered = match command {
        Command::Spectrum => commands::spectrum(config)?,
        Command::T2Map => commands::t2_map(config)?,
        Command::PrMap => commands::pr_map(config)?,
        Command::T2cohMap => commands::t2coh_map(config)?,
        Command::Scaling => commands::scaling(config)?,
        Command::LossMap => commands::loss_map(config)?,
        Command::SwCheck => commands::sw_check(config)?,
        Command::Verify => {
            let (rendered, reports) = commands::verify(config)?;
            for r in &reports {
                eprintln!(
                    "{:<22} max deviation {:.3e} (threshold {:.0e}) {}",
                    r.name,
                    r.max_deviation,
                    r.threshold,
                    if r.passed { "PASS" } else { "FAIL" }
                );
            }
            rendered
        }
    };
    let path = config.output.path.as_deref();
    write(path, &rendered.main)?;
    if let Some(p) = path {
        for (suffix, text) in &rendered.siblings {
            write(Some(&sibling_path(p, suffix)), text)?;
        }
    }
    if rendered.failed_suites.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(rendered.failed_suites))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_names() {
        assert_eq!(sibling_path(Path::new("/tmp/spec.csv"), "effective"), PathBuf::from("/tmp/spec.effective.csv"));
        assert_eq!(sibling_path(Path::new("out"), "effective"), PathBuf::from("out.effective"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 1);
        assert_eq!(CliError::Compute(String::new()).exit_code(), 2);
        assert_eq!(CliError::Verification(vec![]).exit_code(), 3);
    }
}
