// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

use clap::Parser;
use nwqed_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli.command) {
        eprintln!(
            "error[{}]: {} failed: {e}",
            e.invariant_name(),
            cli.command.name()
        );
        std::process::exit(e.exit_code());
    }
}
