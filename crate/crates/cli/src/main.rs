// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! `qpt`: run scenarios and no-go checks, emit text or JSON reports.
//!
//! Exit status: 0 when every check passes, 1 on a failed check, 2 on a usage
//! error, 3 when an input or output file cannot be read, parsed or written.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::output::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qpt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let config = cli.config()?;
    let report = commands::execute(&cli.command, &config)?;
    output::emit(&report, &config)?;
    Ok(report.passed())
}
