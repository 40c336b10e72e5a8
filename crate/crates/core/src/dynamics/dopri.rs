//! Dormand-Prince 5(4) for a scalar autonomous equation, with the
//! fourth-order dense output of Hairer, Nørsett and Wanner.

use super::{DynamicsError, IntegratorConfig, Trajectory};
use crate::models::PointStatus;

// The equation is autonomous, so the stage nodes c_i never appear.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Populations above this are treated as blown up.
pub const DIVERGENCE_LEVEL: f64 = 1e100;

/// Early-termination rules for [`integrate_rhs`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StopRules {
    /// Stop at `p = 1 − 10·abs_tol` (the rate has a branch point at `p = 1`).
    pub capacity_barrier: bool,
    /// Known blow-up time; integration halts at `0.999·t*`.
    pub blow_up: Option<f64>,
}

struct Step {
    t: f64,
    h: f64,
    // dense output coefficients
    r: [f64; 5],
}

impl Step {
    fn at(&self, t: f64) -> f64 {
        let theta = (t - self.t) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = self.r;
        r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)))
    }
}

fn initial_step<E>(
    f: &impl Fn(f64) -> Result<f64, E>,
    y0: f64,
    f0: f64,
    cfg: &IntegratorConfig,
) -> f64 {
    let sk = cfg.abs_tol + cfg.rel_tol * y0.abs();
    let dnf = (f0 / sk).powi(2);
    let dny = (y0 / sk).powi(2);
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * (dny / dnf).sqrt() };
    h = h.min(cfg.max_step);
    let der2 = match f(y0 + h * f0) {
        Ok(f1) => ((f1 - f0) / sk).abs() / h,
        Err(_) => return h * 1e-3,
    };
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der12).powf(0.2) };
    (100.0 * h).min(h1).min(cfg.max_step)
}

/// Integrates `dp/dt = f(p)` from `p(0) = p0` and samples the dense output
/// on `grid`. The step sequence does not depend on the grid.
///
/// A stage at which `f` fails rejects the step and retries with a quarter
/// of the step size.
pub fn integrate_rhs<E, F>(
    f: F,
    p0: f64,
    grid: &[f64],
    cfg: &IntegratorConfig,
    stop: StopRules,
) -> Result<Trajectory, DynamicsError>
where
    F: Fn(f64) -> Result<f64, E>,
    E: Into<DynamicsError>,
{
    cfg.validate()?;
    super::check_grid(grid)?;
    let mut out = Trajectory::with_capacity(grid.len());
    let mut next = 0;
    while next < grid.len() && grid[next] == 0.0 {
        out.push(0.0, p0, PointStatus::Ok);
        next += 1;
    }
    if next == grid.len() {
        return Ok(out);
    }
    let t_end = grid[grid.len() - 1];
    let t_stop = stop.blow_up.map(|t| 0.999 * t).filter(|&t| t < t_end);

    let rhs = |y: f64| f(y).map_err(|e| (y, e));
    let mut t = 0.0;
    let mut y = p0;
    let mut k1 = rhs(y).map_err(|(p, e)| DynamicsError::rhs(0.0, p, e.into()))?;
    let mut h = initial_step(&f, y, k1, cfg);
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut steps = 0usize;
    let mut last_failure: Option<DynamicsError> = None;
    let barrier_level = 1.0 - 10.0 * cfg.abs_tol;

    let finish = |out: &mut Trajectory, next: usize, value: f64, status: PointStatus| {
        for &tg in &grid[next..] {
            out.push(tg, value, status);
        }
    };

    loop {
        if let Some(ts) = t_stop {
            if t >= ts {
                finish(&mut out, next, f64::INFINITY, PointStatus::Diverged);
                return Ok(out);
            }
            h = h.min(ts - t);
        }
        steps += 1;
        if steps > cfg.max_steps {
            return Err(DynamicsError::StepLimit { t, steps: cfg.max_steps });
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            // The step has collapsed; decide whether this is a known wall.
            if stop.capacity_barrier && (1.0 - y).abs() < 1e-6 {
                finish(&mut out, next, barrier_level, PointStatus::Clamped);
                return Ok(out);
            }
            if y.abs() < 1e-8 {
                finish(&mut out, next, 0.0, PointStatus::Clamped);
                return Ok(out);
            }
            if y > 1e10 {
                finish(&mut out, next, f64::INFINITY, PointStatus::Diverged);
                return Ok(out);
            }
            return Err(match last_failure {
                Some(e) => e,
                None => DynamicsError::StepUnderflow { t, p: y },
            });
        }

        let stages = (|| {
            let k2 = rhs(y + h * A21 * k1)?;
            let k3 = rhs(y + h * (A31 * k1 + A32 * k2))?;
            let k4 = rhs(y + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
            let k5 = rhs(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))?;
            let k6 = rhs(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))?;
            let y_new = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
            let k7 = rhs(y_new)?;
            Ok([k2, k3, k4, k5, k6, k7, y_new])
        })();
        let [_k2, k3, k4, k5, k6, k7, y_new] = match stages {
            Ok(s) => s,
            Err((p, e)) => {
                last_failure = Some(DynamicsError::rhs(t, p, e.into()));
                h *= 0.25;
                last_rejected = true;
                continue;
            }
        };

        let sk = cfg.abs_tol + cfg.rel_tol * y.abs().max(y_new.abs());
        let err_est = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let err = (err_est / sk).abs();
        if !err.is_finite() {
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err > 1.0 {
            h /= (1.0 / FAC_MIN).min(fac11 / SAFETY);
            last_rejected = true;
            continue;
        }

        // accepted
        let ydiff = y_new - y;
        let bspl = h * k1 - ydiff;
        let step = Step {
            t,
            h,
            r: [
                y,
                ydiff,
                bspl,
                ydiff - h * k7 - bspl,
                h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7),
            ],
        };
        let t_new = t + h;
        let barrier_hit = stop.capacity_barrier && (1.0 - y_new).abs() < 10.0 * cfg.abs_tol;
        let cap = if stop.capacity_barrier { barrier_level } else { f64::INFINITY };
        while next < grid.len() && grid[next] <= t_new {
            let tg = grid[next];
            let v = if tg == t_new { y_new } else { step.at(tg) };
            out.push(tg, v.min(cap), PointStatus::Ok);
            next += 1;
        }
        if next == grid.len() {
            return Ok(out);
        }
        if barrier_hit {
            finish(&mut out, next, barrier_level, PointStatus::Clamped);
            return Ok(out);
        }
        if !y_new.is_finite() || y_new > DIVERGENCE_LEVEL {
            finish(&mut out, next, f64::INFINITY, PointStatus::Diverged);
            return Ok(out);
        }

        let mut fac = fac11 / fac_old.powf(BETA);
        fac = (1.0 / FAC_MAX).max((1.0 / FAC_MIN).min(fac / SAFETY));
        let mut h_new = h / fac;
        if last_rejected {
            h_new = h_new.min(h);
        }
        h_new = h_new.min(cfg.max_step);
        fac_old = err.max(1e-4);
        last_rejected = false;
        last_failure = None;
        t = t_new;
        y = y_new;
        k1 = k7;
        h = h_new;
    }
}
