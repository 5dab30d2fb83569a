mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use wcs_qrng::Error;

use crate::args::{Cli, Command};
use crate::config::Config;

const EXIT_VALIDATION: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_IO: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain { .. } | Error::InvalidParameter(_) | Error::Bracket { .. } => {
            EXIT_VALIDATION
        }
        Error::Truncation { .. }
        | Error::FockOverflow { .. }
        | Error::Range(_)
        | Error::NoValidEvents
        | Error::Resource { .. }
        | Error::InsufficientData { .. } => EXIT_RUNTIME,
        Error::Io(_) | Error::Format(_) => EXIT_IO,
    }
}

fn run(cli: Cli) -> wcs_qrng::Result<()> {
    let cfg =
        Config::load(cli.config.as_deref()).map_err(|e| match (e, cli.config.as_deref()) {
            (Error::Io(io), Some(p)) => Error::Io(std::io::Error::new(
                io.kind(),
                format!("config {}: {io}", p.display()),
            )),
            (e, _) => e,
        })?;
    match cli.command {
        Command::Sweep(a) => commands::run_sweep(a, &cfg),
        Command::Optimum(a) => commands::run_optimum(a, &cfg),
        Command::Generate(a) => commands::run_generate(a, &cfg),
        Command::Test(a) => commands::run_test(a, &cfg),
        Command::Report(a) => commands::run_report(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
