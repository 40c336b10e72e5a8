//! Argument groups shared by several commands.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use qgrowth::dynamics::IntegratorConfig;
use qgrowth::models::{ModelKind, ParamMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

/// Model name and parameter assignments. Both may also be given
/// positionally: `qgrowth simulate Verhulst r=1 p0=0.001`.
#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Model row, e.g. Verhulst, Richards, TsoularisWallace.
    #[arg(long)]
    pub model: Option<String>,
    /// Parameter assignment (qprime, q, gamma, kappa, r, epsilon, p0).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Model name followed by NAME=VALUE assignments.
    #[arg(value_name = "MODEL|NAME=VALUE")]
    pub positional: Vec<String>,
}

pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| anyhow!("expected NAME=VALUE, got '{s}'"))?;
    let value: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("parameter '{}' has a non-numeric value", name.trim()))?;
    Ok((name.trim().to_string(), value))
}

impl ModelArgs {
    pub fn kind(&self) -> Result<ModelKind> {
        self.resolve_kind()?.ok_or_else(|| anyhow!("no model given (use --model NAME)"))
    }

    pub fn resolve_kind(&self) -> Result<Option<ModelKind>> {
        let positional = self.positional.iter().find(|s| !s.contains('='));
        let name = match (&self.model, positional) {
            (Some(_), Some(p)) => bail!("model given twice (--model and '{p}')"),
            (Some(m), None) => m,
            (None, Some(p)) => p,
            (None, None) => return Ok(None),
        };
        Ok(Some(name.parse()?))
    }

    pub fn param_map(&self) -> Result<ParamMap> {
        let mut map = ParamMap::new();
        let assignments = self.params.iter().chain(self.positional.iter().filter(|s| s.contains('=')));
        for s in assignments {
            let (name, value) = parse_assignment(s)?;
            if map.insert(name.clone(), value).is_some() {
                bail!("parameter '{name}' given twice");
            }
        }
        Ok(map)
    }
}

#[derive(Args, Debug)]
pub struct ToleranceArgs {
    /// Relative tolerance of the integrator.
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    /// Absolute tolerance of the integrator.
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    /// Largest number of integrator steps.
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
}

impl ToleranceArgs {
    pub fn config(&self) -> Result<IntegratorConfig> {
        let cfg = IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_steps: self.max_steps,
            ..IntegratorConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_stop: f64,
    /// Number of evenly spaced times, both ends included.
    #[arg(long, default_value_t = 101)]
    pub t_count: usize,
    /// Explicit comma-separated times; overrides the even grid.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub times: Option<Vec<f64>>,
}

impl GridArgs {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if let Some(times) = &self.times {
            return Ok(times.clone());
        }
        let (a, b, n) = (self.t_start, self.t_stop, self.t_count);
        match n {
            0 => bail!("--t-count must be at least 1"),
            1 => Ok(vec![a]),
            _ => {
                if !(b > a) {
                    bail!("--t-stop must exceed --t-start");
                }
                let last = (n - 1) as f64;
                Ok((0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / last }).collect())
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Omit the leading `#` metadata line from CSV output.
    #[arg(long)]
    pub no_header_comment: bool,
}
