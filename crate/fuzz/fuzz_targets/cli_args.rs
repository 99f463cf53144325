#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use relqosc::args::{Cli, Command};
use relqosc::config::{ConfigFile, RunConfig};

// Argument parsing and config resolution only; no solves, no file access.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let argv = std::iter::once("relqosc").chain(text.split_whitespace());
    let Ok(cli) = Cli::try_parse_from(argv) else {
        return;
    };
    let c_list = match &cli.command {
        Command::Nonrel { c_list, .. } => c_list.as_deref(),
        _ => None,
    };
    if let Ok(cfg) = RunConfig::resolve(cli.command.common(), &ConfigFile::default(), c_list) {
        let _ = cfg.spec();
    }
});
