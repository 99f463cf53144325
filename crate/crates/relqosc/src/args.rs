use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relqosc_core::Family;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "relqosc",
    version,
    about = "Spectra of Dirac and Dirac-isotonic oscillators in 1+1 and 2+1 dimensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels from the closed forms and/or the finite-difference solver.
    Spectrum(CommonArgs),
    /// Sampled upper and lower spinor components of one level (CSV).
    Wavefunction {
        #[command(flatten)]
        common: CommonArgs,
        /// Level index.
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
    /// Run a property suite; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Approach to the Schrodinger limit as c grows.
    Nonrel {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated speeds of light, ascending.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        c_list: Option<Vec<f64>>,
    },
    /// Supercharge spectrum in anti-Jaynes-Cummings form.
    Ajc(CommonArgs),
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(c) | Command::Ajc(c) => c,
            Command::Wavefunction { common, .. }
            | Command::Verify { common, .. }
            | Command::Nonrel { common, .. } => common,
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ml: Option<i32>,
    /// Number of levels.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Interior grid points.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Outer boundary; chosen from the potential when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
    /// Supercharge scale; defaults to 4 m omega or 4 m a.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the flag values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: relqosc_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Numeric,
    Both,
}

impl Method {
    pub fn analytic(self) -> bool {
        self != Method::Numeric
    }

    pub fn numeric(self) -> bool {
        self != Method::Analytic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Spectrum,
    Susy,
    Nonrel,
    Pair,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Spectrum => "spectrum",
            Suite::Susy => "susy",
            Suite::Nonrel => "nonrel",
            Suite::Pair => "pair",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Suite as ValueEnum>::from_str(s, false)
    }
}
