use std::path::Path;

use relqosc_core::{Family, GridOptions, ModelSpec, PhysicalParams};
use serde::Deserialize;

use crate::args::{CommonArgs, Format, Method};
use crate::error::CliError;

/// Contents of a `--config` file. Every field is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<Family>,
    pub m: Option<f64>,
    pub c: Option<f64>,
    pub omega: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub ml: Option<i32>,
    pub levels: Option<usize>,
    pub grid_n: Option<usize>,
    pub grid_max: Option<f64>,
    pub method: Option<Method>,
    pub format: Option<Format>,
    pub tolerance: Option<f64>,
    pub delta: Option<f64>,
    pub c_list: Option<Vec<f64>>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub const DEFAULT_LEVELS: usize = 5;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_C_LIST: [f64; 3] = [10.0, 20.0, 40.0];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    pub params: PhysicalParams,
    pub ml: Option<i32>,
    pub levels: usize,
    pub grid_n: usize,
    pub grid_max: Option<f64>,
    pub method: Method,
    pub format: Format,
    pub tolerance: f64,
    pub delta: Option<f64>,
    pub c_list: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::resolve(&CommonArgs::default(), &ConfigFile::default(), None)
            .expect("defaults are valid")
    }
}

impl RunConfig {
    /// Merge flags over the config file over defaults, then check the
    /// values that do not depend on the model.
    pub fn resolve(
        args: &CommonArgs,
        file: &ConfigFile,
        c_list: Option<&[f64]>,
    ) -> Result<Self, CliError> {
        let family = args
            .family
            .or(file.family)
            .unwrap_or(Family::Dirac1DHarmonic);
        let default_b = match family {
            Family::Dirac2DIsotonic => 0.25,
            _ => 1.0,
        };
        let params = PhysicalParams {
            m: args.m.or(file.m).unwrap_or(1.0),
            c: args.c.or(file.c).unwrap_or(1.0),
            omega: args.omega.or(file.omega).unwrap_or(1.0),
            a: args.a.or(file.a).unwrap_or(1.0),
            b: args.b.or(file.b).unwrap_or(default_b),
        };
        let ml = args
            .ml
            .or(file.ml)
            .or(if family.is_2d() { Some(1) } else { None });
        let cfg = RunConfig {
            family,
            params,
            ml,
            levels: args.levels.or(file.levels).unwrap_or(DEFAULT_LEVELS),
            grid_n: args
                .grid_n
                .or(file.grid_n)
                .unwrap_or(relqosc_core::solver::DEFAULT_GRID_POINTS),
            grid_max: args.grid_max.or(file.grid_max),
            method: args.method.or(file.method).unwrap_or(Method::Both),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
            tolerance: args
                .tolerance
                .or(file.tolerance)
                .unwrap_or(DEFAULT_TOLERANCE),
            delta: args.delta.or(file.delta),
            c_list: c_list
                .map(<[f64]>::to_vec)
                .or_else(|| file.c_list.clone())
                .unwrap_or_else(|| DEFAULT_C_LIST.to_vec()),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.levels == 0 {
            return usage("--levels must be at least 1".into());
        }
        if self.grid_n < 3 {
            return usage(format!("--grid-n must be at least 3, got {}", self.grid_n));
        }
        if let Some(x) = self.grid_max {
            if !(x.is_finite() && x > 0.0) {
                return usage(format!("--grid-max must be > 0, got {x}"));
            }
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return usage(format!("--tolerance must be > 0, got {}", self.tolerance));
        }
        if let Some(d) = self.delta {
            if !(d.is_finite() && d > 0.0) {
                return usage(format!("--delta must be > 0, got {d}"));
            }
        }
        if self.c_list.len() < 2 {
            return usage("--c-list needs at least two values".into());
        }
        if self.c_list.iter().any(|c| !(c.is_finite() && *c > 0.0))
            || self.c_list.windows(2).any(|w| w[1] <= w[0])
        {
            return usage("--c-list must be positive and strictly increasing".into());
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<ModelSpec, CliError> {
        Ok(ModelSpec::new(self.family, self.params, self.ml)?)
    }

    pub fn grid_options(&self) -> GridOptions {
        GridOptions {
            n_points: self.grid_n,
            x_max: self.grid_max,
        }
    }
}
