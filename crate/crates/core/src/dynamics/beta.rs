//! Trajectories from the implicit incomplete-beta solution.
//!
//! For `γ < 1` and no effort, `u = p^{|q|}` satisfies
//! `u^{a−1}(1−u)^{b−1} du = κ |q|^{1−γ} dt` with `b = 1 − γ` and
//! `a = q'/q` (when `q, q' > 0`) or `a = γ + q'/|q|` (when `q, q' < 0`),
//! so `B_u(a, b) − B_{u0}(a, b) = κ |q|^{1−γ} t`.

use super::{check_grid, DynamicsError, Trajectory};
use crate::models::{GrowthParams, PointStatus};
use crate::specfun::{inc_beta, inc_beta_inverse};

/// Shape parameters `(a, b, |q|)` of the implicit solution, or why it
/// does not apply.
pub fn beta_shapes(params: &GrowthParams) -> Result<(f64, f64, f64), &'static str> {
    let (qp, q, gamma) = (params.q_prime(), params.q(), params.gamma());
    if !(gamma < 1.0) {
        return Err("the implicit solution needs gamma < 1");
    }
    if params.effort() != 0.0 {
        return Err("the implicit solution has no effort term");
    }
    if !(params.p0() < 1.0) {
        return Err("the implicit solution needs p0 < 1");
    }
    let b = 1.0 - gamma;
    let s = q.abs();
    let a = if q > 0.0 && qp > 0.0 {
        qp / q
    } else if q < 0.0 && qp < 0.0 {
        gamma + qp / s
    } else {
        return Err("the implicit solution needs q and q' of the same non-zero sign");
    };
    if !(a > 0.0 && a.is_finite()) {
        return Err("the implicit solution needs gamma + q'/|q| > 0");
    }
    Ok((a, b, s))
}

pub fn beta_applies(params: &GrowthParams) -> bool {
    beta_shapes(params).is_ok()
}

/// Solves the implicit equation at every grid time. Points past the time
/// at which capacity (or extinction, for `κ < 0`) is reached are flagged
/// clamped.
pub fn propagate_beta(params: &GrowthParams, grid: &[f64]) -> Result<Trajectory, DynamicsError> {
    let (a, b, s) = beta_shapes(params).map_err(DynamicsError::Regime)?;
    check_grid(grid)?;
    let p0 = params.p0();
    let u0 = p0.powf(s);
    let start = inc_beta(a, b, u0)?;
    let full = inc_beta(a, b, 1.0)?;
    let rate = params.kappa() * s.powf(1.0 - params.gamma());

    let mut out = Trajectory::with_capacity(grid.len());
    let mut u_prev = u0;
    for &t in grid {
        if t == 0.0 {
            out.push(t, p0, PointStatus::Ok);
            continue;
        }
        let target = start + rate * t;
        if target >= full {
            out.push(t, 1.0, PointStatus::Clamped);
            continue;
        }
        if target <= 0.0 {
            out.push(t, 0.0, PointStatus::Clamped);
            continue;
        }
        // the solution is monotone, so the previous point bounds the next
        let (lo, hi) = if rate >= 0.0 { (u_prev, 1.0) } else { (0.0, u_prev) };
        let u = if lo < hi { inc_beta_inverse(target, a, b, lo, hi)? } else { u_prev };
        u_prev = u;
        out.push(t, u.powf(1.0 / s), PointStatus::Ok);
    }
    Ok(out)
}
