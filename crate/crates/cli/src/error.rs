// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] nwqed::Error),
    #[error("postcondition `{invariant}` failed: {detail}")]
    Postcondition {
        invariant: &'static str,
        detail: String,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration errors, 3 for failed numerical checks, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Postcondition { .. } => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn invariant_name(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core(e) => e.invariant_name(),
            CliError::Postcondition { invariant, .. } => invariant,
            CliError::Io(_) => "io",
        }
    }
}
