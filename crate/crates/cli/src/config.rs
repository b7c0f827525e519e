//! Run configuration. Values come from built-in defaults, then an optional
//! flat `key = value` file, then command-line flags, each layer overriding
//! the previous one. Environment variables are never read.
//!
//! File syntax: one `key = value` per line, `#` starts a comment, blank lines
//! are ignored. Keys are the long flag names with `-` replaced by `_`.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qbattery_core::regime::WindowFactors;
use qbattery_core::Evaluator;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Xy,
    Ising,
}

impl FromStr for Model {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "xy" => Ok(Model::Xy),
            "ising" => Ok(Model::Ising),
            _ => Err(CliError::Input(format!(
                "unknown model '{s}' (expected xy|ising)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Input(format!(
                "unknown format '{s}' (expected csv|json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub gamma: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub n_dimers: usize,
    pub h0: f64,
    pub h1: f64,
    pub n_sites: usize,
    /// Defaults per command: end of the revival window for traces, 50 for
    /// oracle checks.
    pub t_end: Option<f64>,
    /// Defaults per command: 0.02 for traces and sweeps, 0.1 for oracle checks.
    pub dt: Option<f64>,
    pub short_span: f64,
    pub window_a: Option<f64>,
    pub window_b: Option<f64>,
    pub evaluator: Evaluator,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: Option<usize>,
    pub grid_start: Option<f64>,
    pub grid_stop: Option<f64>,
    pub grid_step: Option<f64>,
    pub grid: Option<Vec<f64>>,
    pub sizes: Vec<usize>,
    pub time: Option<f64>,
    /// Dimerization for `phase`; falls back to `delta0`.
    pub delta: Option<f64>,
    pub sites: usize,
    pub tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: Model::Xy,
            gamma: 1.25,
            delta0: 0.3,
            delta1: 0.6,
            n_dimers: 300,
            h0: 0.8,
            h1: 0.7,
            n_sites: 600,
            t_end: None,
            dt: None,
            short_span: 50.0,
            window_a: None,
            window_b: None,
            evaluator: Evaluator::Full,
            out: None,
            format: Format::Csv,
            workers: None,
            grid_start: None,
            grid_stop: None,
            grid_step: None,
            grid: None,
            sizes: vec![50, 100, 200, 300],
            time: None,
            delta: None,
            sites: 4,
            tolerance: 1e-8,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Input(format!("invalid value '{value}' for '{key}'")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "model" => self.model = value.parse()?,
            "gamma" => self.gamma = parse(key, value)?,
            "delta0" => self.delta0 = parse(key, value)?,
            "delta1" => self.delta1 = parse(key, value)?,
            "n_dimers" => self.n_dimers = parse(key, value)?,
            "h0" => self.h0 = parse(key, value)?,
            "h1" => self.h1 = parse(key, value)?,
            "n_sites" => self.n_sites = parse(key, value)?,
            "t_end" => self.t_end = Some(parse(key, value)?),
            "dt" => self.dt = Some(parse(key, value)?),
            "short_span" => self.short_span = parse(key, value)?,
            "window_a" => self.window_a = Some(parse(key, value)?),
            "window_b" => self.window_b = Some(parse(key, value)?),
            "evaluator" => {
                self.evaluator = value
                    .parse()
                    .map_err(|e: qbattery_core::Error| CliError::Input(e.to_string()))?
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "workers" => self.workers = Some(parse(key, value)?),
            "grid_start" => self.grid_start = Some(parse(key, value)?),
            "grid_stop" => self.grid_stop = Some(parse(key, value)?),
            "grid_step" => self.grid_step = Some(parse(key, value)?),
            "grid" => self.grid = Some(parse_list(key, value)?),
            "sizes" => self.sizes = parse_list(key, value)?,
            "time" => self.time = Some(parse(key, value)?),
            "delta" => self.delta = Some(parse(key, value)?),
            "sites" => self.sites = parse(key, value)?,
            "tolerance" => self.tolerance = parse(key, value)?,
            _ => return Err(CliError::Input(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    pub fn apply_str(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Input(format!("config line {}: expected 'key = value'", i + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Input(format!("config line {}: {}", i + 1, e.message())))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_str(&text)
    }

    pub fn window_factors(&self) -> Result<Option<WindowFactors>, CliError> {
        let default = match self.model {
            Model::Xy => WindowFactors::XY,
            Model::Ising => WindowFactors::ISING,
        };
        match (self.window_a, self.window_b) {
            (None, None) => Ok(None),
            (a, b) => WindowFactors::new(a.unwrap_or(default.a), b.unwrap_or(default.b))
                .map(Some)
                .map_err(CliError::from),
        }
    }

    pub fn size(&self) -> usize {
        match self.model {
            Model::Xy => self.n_dimers,
            Model::Ising => self.n_sites,
        }
    }
}
