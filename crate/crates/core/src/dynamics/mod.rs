//! Trajectories of the unified law: closed forms where they exist, the
//! implicit incomplete-beta solution, and adaptive integration otherwise.

mod beta;
mod dopri;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{
    closed_form, has_closed_form, model_table, rhs_dp_dt, richards_divergence_time, GrowthParams,
    ModelError, ModelKind, ParamMap, PointStatus,
};
use crate::specfun::BetaError;

pub use beta::{beta_applies, beta_shapes, propagate_beta};
pub use dopri::{integrate_rhs, StopRules, DIVERGENCE_LEVEL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Beta(#[from] BetaError),
    #[error("invalid time grid: {0}")]
    Grid(&'static str),
    #[error("invalid integrator configuration: {0}")]
    Config(&'static str),
    #[error("step limit of {steps} reached at t = {t}")]
    StepLimit { t: f64, steps: usize },
    #[error("step size underflow at t = {t}, p = {p}")]
    StepUnderflow { t: f64, p: f64 },
    #[error("right-hand side failed near t = {t}, p = {p}: {source}")]
    Rhs {
        t: f64,
        p: f64,
        #[source]
        source: Box<DynamicsError>,
    },
    #[error("{0}")]
    Regime(&'static str),
}

impl DynamicsError {
    fn rhs(t: f64, p: f64, source: DynamicsError) -> Self {
        DynamicsError::Rhs { t, p, source: Box::new(source) }
    }
}

/// Sampled solution `p(t)` with a status per point.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<f64>,
    flags: Vec<PointStatus>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, values: Vec<f64>, flags: Vec<PointStatus>) -> Result<Self, DynamicsError> {
        if times.len() != values.len() || times.len() != flags.len() {
            return Err(DynamicsError::Grid("times, values and flags differ in length"));
        }
        check_grid(&times)?;
        for (&v, &f) in values.iter().zip(&flags) {
            let ok = match f {
                PointStatus::Ok => v.is_finite() && v > 0.0,
                PointStatus::Clamped => v.is_finite() && v >= 0.0,
                PointStatus::Diverged => true,
            };
            if !ok {
                return Err(DynamicsError::Grid("value inconsistent with its flag"));
            }
        }
        Ok(Trajectory { times, values, flags })
    }

    pub(crate) fn with_capacity(n: usize) -> Self {
        Trajectory { times: Vec::with_capacity(n), values: Vec::with_capacity(n), flags: Vec::with_capacity(n) }
    }

    pub(crate) fn push(&mut self, t: f64, value: f64, flag: PointStatus) {
        self.times.push(t);
        self.values.push(value);
        self.flags.push(flag);
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn flags(&self) -> &[PointStatus] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, PointStatus)> + '_ {
        self.times
            .iter()
            .zip(&self.values)
            .zip(&self.flags)
            .map(|((&t, &v), &f)| (t, v, f))
    }

    pub fn all_ok(&self) -> bool {
        self.flags.iter().all(|&f| f == PointStatus::Ok)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { rel_tol: 1e-9, abs_tol: 1e-12, max_step: f64::INFINITY, max_steps: 100_000 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(DynamicsError::Config("rel_tol must be positive"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(DynamicsError::Config("abs_tol must be positive"));
        }
        if !(self.max_step > 0.0) {
            return Err(DynamicsError::Config("max_step must be positive"));
        }
        if self.max_steps == 0 {
            return Err(DynamicsError::Config("max_steps must be positive"));
        }
        Ok(())
    }
}

/// Times are measured from the initial condition, so a grid is
/// non-negative and strictly increasing.
pub(crate) fn check_grid(grid: &[f64]) -> Result<(), DynamicsError> {
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(DynamicsError::Grid("times must be finite and non-negative"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DynamicsError::Grid("times must be strictly increasing"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Beta,
    Ode,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Beta => "beta",
            Method::Ode => "ode",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn blow_up_time(params: &GrowthParams) -> Option<f64> {
    let richards_like = params.effort() == 0.0 && params.gamma() == 1.0 && params.q_prime() == 0.0;
    if richards_like && params.kappa() < 0.0 && params.p0() > 1.0 && params.q() > 0.0 {
        richards_divergence_time(params.q(), params.kappa(), params.p0()).ok()
    } else {
        None
    }
}

/// Adaptive integration of the unified law on `grid`.
pub fn integrate(params: &GrowthParams, grid: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory, DynamicsError> {
    let stop = StopRules { capacity_barrier: params.bounded_by_capacity(), blow_up: blow_up_time(params) };
    integrate_rhs(|p| rhs_dp_dt(params, p), params.p0(), grid, cfg, stop)
}

/// Path [`solve_params`] takes for a row and parameter set.
pub fn choose_method(kind: ModelKind, params: &GrowthParams) -> Method {
    if has_closed_form(kind, params) {
        Method::Analytic
    } else if beta_applies(params) {
        Method::Beta
    } else {
        Method::Ode
    }
}

pub fn solve_params(
    kind: ModelKind,
    params: &GrowthParams,
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, Method), DynamicsError> {
    let method = choose_method(kind, params);
    let traj = match method {
        Method::Analytic => {
            check_grid(grid)?;
            let mut out = Trajectory::with_capacity(grid.len());
            for &t in grid {
                let pt = closed_form(kind, params, t).expect("row has a closed form")?;
                out.push(t, pt.value, pt.status);
            }
            out
        }
        Method::Beta => propagate_beta(params, grid)?,
        Method::Ode => integrate(params, grid, cfg)?,
    };
    Ok((traj, method))
}

/// Binds the row's free parameters and computes the trajectory by the
/// best available path.
pub fn solve(
    kind: ModelKind,
    free: &ParamMap,
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, Method), DynamicsError> {
    let params = model_table(kind, free)?;
    solve_params(kind, &params, grid, cfg)
}
