//! Least-squares estimation of model parameters from observed series.

pub mod simplex;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{solve_params, DynamicsError, IntegratorConfig, Method};
use crate::models::{model_table, GrowthParams, ModelError, ModelKind, ParamMap};
use simplex::{minimize, SimplexOptions};

/// Name under which the carrying capacity can be fitted.
pub const N_INF: &str = "n_inf";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("invalid series: {0}")]
    Series(&'static str),
    #[error("{kind}: '{name}' cannot be fitted for this row")]
    UnknownFree { kind: ModelKind, name: String },
    #[error("no initial value for '{0}'")]
    MissingInit(String),
    #[error("{n_obs} observations cannot determine {n_free} free parameters")]
    Unidentifiable { n_obs: usize, n_free: usize },
    #[error("bounds for '{name}': {reason}")]
    BadBounds { name: String, reason: &'static str },
    #[error("raw counts need a carrying capacity (give n_inf or fit it)")]
    NoCapacity,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Population counts `n`.
    Raw,
    /// Fractions of capacity `p = n / n_∞`.
    Normalized,
}

/// Observed `(t, value)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    units: Units,
    carrying_capacity: Option<f64>,
}

impl ObservationSeries {
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        units: Units,
        carrying_capacity: Option<f64>,
    ) -> Result<Self, FitError> {
        if times.len() != values.len() {
            return Err(FitError::Series("times and values differ in length"));
        }
        if times.len() < 3 {
            return Err(FitError::Series("at least 3 observations are needed"));
        }
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(FitError::Series("times must be finite and non-negative"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FitError::Series("times must be strictly increasing"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(FitError::Series("values must be positive and finite"));
        }
        if let Some(k) = carrying_capacity {
            if !(k.is_finite() && k > 0.0) {
                return Err(FitError::Series("carrying capacity must be positive"));
            }
        }
        Ok(ObservationSeries { times, values, units, carrying_capacity })
    }

    pub fn normalized(times: Vec<f64>, p: Vec<f64>) -> Result<Self, FitError> {
        Self::new(times, p, Units::Normalized, None)
    }

    pub fn raw(times: Vec<f64>, n: Vec<f64>, carrying_capacity: Option<f64>) -> Result<Self, FitError> {
        Self::new(times, n, Units::Raw, carrying_capacity)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn carrying_capacity(&self) -> Option<f64> {
        self.carrying_capacity
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Values as fractions of capacity; `n_inf` overrides the stored one.
    pub fn normalized_values(&self, n_inf: Option<f64>) -> Result<Vec<f64>, FitError> {
        match self.units {
            Units::Normalized => Ok(self.values.clone()),
            Units::Raw => {
                let k = n_inf.or(self.carrying_capacity).ok_or(FitError::NoCapacity)?;
                Ok(self.values.iter().map(|n| n / k).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossSpace {
    Linear,
    #[default]
    Log,
}

impl LossSpace {
    pub fn as_str(self) -> &'static str {
        match self {
            LossSpace::Linear => "linear",
            LossSpace::Log => "log",
        }
    }
}

impl fmt::Display for LossSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LossSpace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(LossSpace::Linear),
            "log" => Ok(LossSpace::Log),
            _ => Err(format!("unknown loss space '{s}' (expected linear or log)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Names of the estimated parameters, possibly including `n_inf`.
    pub free: Vec<String>,
    /// Values for every parameter of the row, free ones as starting points.
    pub init: ParamMap,
    pub bounds: BTreeMap<String, (f64, f64)>,
    pub loss: LossSpace,
    pub integrator: IntegratorConfig,
    pub simplex: SimplexOptions,
}

impl FitOptions {
    pub fn new(free: &[&str], init: ParamMap) -> Self {
        FitOptions {
            free: free.iter().map(|s| s.to_string()).collect(),
            init,
            bounds: BTreeMap::new(),
            loss: LossSpace::default(),
            integrator: IntegratorConfig::default(),
            simplex: SimplexOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: GrowthParams,
    pub free_values: ParamMap,
    pub sse: f64,
    pub n_evals: usize,
    pub converged: bool,
    pub loss_space: LossSpace,
    pub method: Method,
}

fn residual(observed: f64, model: f64, loss: LossSpace) -> f64 {
    match loss {
        LossSpace::Linear => observed - model,
        LossSpace::Log => observed.ln() - model.ln(),
    }
}

/// Observed minus model at each observation, in `loss` space. A
/// non-positive or blown-up model value gives a non-finite residual.
pub fn residuals(
    series: &ObservationSeries,
    kind: ModelKind,
    params: &GrowthParams,
    loss: LossSpace,
) -> Result<Vec<f64>, FitError> {
    residuals_with(series, kind, params, loss, None, &IntegratorConfig::default())
}

fn residuals_with(
    series: &ObservationSeries,
    kind: ModelKind,
    params: &GrowthParams,
    loss: LossSpace,
    n_inf: Option<f64>,
    cfg: &IntegratorConfig,
) -> Result<Vec<f64>, FitError> {
    let observed = series.normalized_values(n_inf)?;
    let (traj, _) = solve_params(kind, params, series.times(), cfg)?;
    Ok(observed.iter().zip(traj.values()).map(|(&o, &m)| residual(o, m, loss)).collect())
}

/// Sum of squared [`residuals`].
pub fn sse(series: &ObservationSeries, kind: ModelKind, params: &GrowthParams, loss: LossSpace) -> Result<f64, FitError> {
    Ok(residuals(series, kind, params, loss)?.iter().map(|r| r * r).sum())
}

/// Fits `free` starting from `init` (which must also hold the row's other
/// parameters), without bounds.
pub fn fit(
    series: &ObservationSeries,
    kind: ModelKind,
    free: &[&str],
    init: &ParamMap,
    loss: LossSpace,
) -> Result<FitResult, FitError> {
    let mut opts = FitOptions::new(free, init.clone());
    opts.loss = loss;
    fit_with(series, kind, &opts)
}

pub fn fit_with(series: &ObservationSeries, kind: ModelKind, opts: &FitOptions) -> Result<FitResult, FitError> {
    let accepted = kind.parameter_names();
    for name in &opts.free {
        if name != N_INF && !accepted.contains(&name.as_str()) {
            return Err(FitError::UnknownFree { kind, name: name.clone() });
        }
    }
    for name in opts.bounds.keys() {
        if !opts.free.contains(name) {
            return Err(FitError::BadBounds { name: name.clone(), reason: "not a free parameter" });
        }
    }
    let n_free = opts.free.len();
    if series.len() < n_free + 1 {
        return Err(FitError::Unidentifiable { n_obs: series.len(), n_free });
    }
    let fit_capacity = opts.free.iter().any(|n| n == N_INF);
    if series.units() == Units::Raw && !fit_capacity && series.carrying_capacity().is_none() && !opts.init.contains_key(N_INF) {
        return Err(FitError::NoCapacity);
    }

    let mut x0 = Vec::with_capacity(n_free);
    let mut lower = Vec::with_capacity(n_free);
    let mut upper = Vec::with_capacity(n_free);
    for name in &opts.free {
        let v = *opts.init.get(name).ok_or_else(|| FitError::MissingInit(name.clone()))?;
        let (lo, hi) = opts.bounds.get(name).copied().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        if !(lo < hi) || lo.is_nan() || hi.is_nan() {
            return Err(FitError::BadBounds { name: name.clone(), reason: "lower must be below upper" });
        }
        if !(lo <= v && v <= hi) {
            return Err(FitError::BadBounds { name: name.clone(), reason: "initial value lies outside" });
        }
        x0.push(v);
        lower.push(lo);
        upper.push(hi);
    }

    // split a candidate into model parameters and the capacity
    let bind = |x: &[f64]| -> Result<(GrowthParams, Option<f64>), FitError> {
        let mut map = opts.init.clone();
        for (name, v) in opts.free.iter().zip(x) {
            map.insert(name.clone(), *v);
        }
        let n_inf = map.remove(N_INF);
        Ok((model_table(kind, &map)?, n_inf))
    };
    // surface configuration errors before searching
    bind(&x0)?;

    let loss_at = |x: &[f64]| -> f64 {
        let Ok((params, n_inf)) = bind(x) else { return f64::INFINITY };
        if n_inf.is_some_and(|k| !(k > 0.0)) {
            return f64::INFINITY;
        }
        match residuals_with(series, kind, &params, opts.loss, n_inf, &opts.integrator) {
            Ok(r) => {
                let s: f64 = r.iter().map(|v| v * v).sum();
                if s.is_finite() {
                    s
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        }
    };
    let result = minimize(loss_at, &x0, &lower, &upper, &opts.simplex);

    let (params, _) = bind(&result.x)?;
    let free_values = opts.free.iter().cloned().zip(result.x.iter().copied()).collect();
    Ok(FitResult {
        params,
        free_values,
        sse: result.fx,
        n_evals: result.n_evals,
        converged: result.converged && result.fx.is_finite(),
        loss_space: opts.loss,
        method: crate::dynamics::choose_method(kind, &params),
    })
}
