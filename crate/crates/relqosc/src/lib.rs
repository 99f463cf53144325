//! `relqosc`: spectra, wavefunctions and property checks for Dirac and
//! Dirac-isotonic oscillators from the command line.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use config::{load_config, ConfigFile, RunConfig};
use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let common = cli.command.common();
    let file = match &common.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };
    let c_list = match &cli.command {
        Command::Nonrel { c_list, .. } => c_list.as_deref(),
        _ => None,
    };
    let cfg = RunConfig::resolve(common, &file, c_list)?;

    let mut sink: Box<dyn Write + '_> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(&mut *out),
    };
    let code = match &cli.command {
        Command::Spectrum(_) => {
            commands::spectrum(&cfg, &mut *sink)?;
            EXIT_OK
        }
        Command::Wavefunction { n, .. } => {
            commands::wavefunction(&cfg, *n, &mut *sink)?;
            EXIT_OK
        }
        Command::Ajc(_) => {
            commands::ajc(&cfg, &mut *sink)?;
            EXIT_OK
        }
        Command::Nonrel { .. } => {
            let failed = commands::nonrel(&cfg, &mut *sink)?;
            if failed.is_empty() {
                EXIT_OK
            } else {
                serde_json::to_writer_pretty(&mut *err, &failed)?;
                writeln!(err)?;
                EXIT_VERIFY_FAILED
            }
        }
        Command::Verify { suite, .. } => {
            let checks = verify::run_suite(*suite, &cfg)?;
            if verify::report(&checks, &mut *sink, err)? {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
    };
    sink.flush()?;
    Ok(code)
}
