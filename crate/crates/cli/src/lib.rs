// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Driver behind the `nwqed` binary: configuration, subcommands and dataset
//! output.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{Key, RawConfig};
use dataset::Dataset;
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "nwqed",
    version,
    about = "Single-emitter waveguide QED datasets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Reflection, transmission and loss versus detuning.
    Scatter(Common),
    /// Steady-state transmittance and reflectance versus drive strength.
    Saturation(Common),
    /// Second-order correlation of an output field.
    G2(Common),
    /// Conditional emitter state after a photodetection.
    Jump(Common),
    /// Discrete-mode wavepacket check of the scattering spectrum.
    Oracle(Common),
    /// Impedance-matched photon storage in a three-level emitter.
    Storage(Common),
    /// Single-photon transistor: gate storage, signal routing, gain.
    Transistor(Common),
}

#[derive(Debug, Clone, Args, PartialEq, Eq)]
pub struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: one per processor).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Override a configuration key, e.g. `--set purcell=5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Scatter(_) => "scatter",
            Command::Saturation(_) => "saturation",
            Command::G2(_) => "g2",
            Command::Jump(_) => "jump",
            Command::Oracle(_) => "oracle",
            Command::Storage(_) => "storage",
            Command::Transistor(_) => "transistor",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Scatter(c)
            | Command::Saturation(c)
            | Command::G2(c)
            | Command::Jump(c)
            | Command::Oracle(c)
            | Command::Storage(c)
            | Command::Transistor(c) => c,
        }
    }

    pub fn schema(&self) -> &'static [Key] {
        match self {
            Command::Scatter(_) => commands::SCATTER_KEYS,
            Command::Saturation(_) => commands::SATURATION_KEYS,
            Command::G2(_) => commands::G2_KEYS,
            Command::Jump(_) => commands::JUMP_KEYS,
            Command::Oracle(_) => commands::ORACLE_KEYS,
            Command::Storage(_) => commands::STORAGE_KEYS,
            Command::Transistor(_) => commands::TRANSISTOR_KEYS,
        }
    }
}

/// Reads the configuration and builds the dataset without writing it.
pub fn build(command: &Command) -> Result<Dataset, CliError> {
    let common = command.common();
    let mut raw = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    for assignment in &common.overrides {
        raw.set(assignment)?;
    }
    let cfg = raw.resolve(command.schema())?;
    let seed = common.seed;
    let run = || match command {
        Command::Scatter(_) => commands::scatter(&cfg, seed),
        Command::Saturation(_) => commands::saturation(&cfg, seed),
        Command::G2(_) => commands::g2_curves(&cfg, seed),
        Command::Jump(_) => commands::jump(&cfg, seed),
        Command::Oracle(_) => commands::oracle(&cfg, seed),
        Command::Storage(_) => commands::storage(&cfg, seed),
        Command::Transistor(_) => commands::transistor(&cfg, seed),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} workers: {e}", common.workers)))?;
    pool.install(run)
}

pub fn run(command: &Command) -> Result<(), CliError> {
    let text = build(command)?.render();
    match &command.common().out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
