//! Lower incomplete beta integral `B_x(a, b) = ∫_0^x t^(a-1) (1-t)^(b-1) dt`
//! (not regularized) and its inverse in `x`.
//!
//! The integral is computed by adaptive quadrature after variable changes that
//! remove the endpoint singularities, so it also covers `b <= 0` as long as
//! `x < 1`, which continued-fraction methods for the regularized function do
//! not.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{self, QuadError};

/// Contract accuracy of [`inc_beta`]: absolute or relative, whichever is looser.
pub const INC_BETA_TOL: f64 = 1e-10;

// Internal target; tighter than the contract so that the inverse can resolve x.
const QUAD_REL_TOL: f64 = 1e-14;
const QUAD_ABS_TOL: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BetaError {
    #[error("first shape parameter must be positive and finite, got a = {0}")]
    BadShapeA(f64),
    #[error("second shape parameter must be finite, got b = {0}")]
    BadShapeB(f64),
    #[error("upper limit must lie in [0, 1], got x = {0}")]
    OutOfRange(f64),
    #[error("B_1(a, b) diverges for b = {b} <= 0")]
    Divergent { b: f64 },
    #[error("bracket [{lo}, {hi}] is not a valid sub-interval of [0, 1]")]
    BadBracket { lo: f64, hi: f64 },
    #[error("target {target} lies outside [{low}, {high}], the image of the bracket")]
    NoRoot { target: f64, low: f64, high: f64 },
    #[error("root search stalled at x = {x} with residual {residual:e}")]
    NotConverged { x: f64, residual: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Arguments of the lower incomplete beta integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaArgs {
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

impl BetaArgs {
    pub fn new(a: f64, b: f64, x: f64) -> Result<Self, BetaError> {
        let args = BetaArgs { a, b, x };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<(), BetaError> {
        validate_shapes(self.a, self.b)?;
        if !(0.0..=1.0).contains(&self.x) {
            return Err(BetaError::OutOfRange(self.x));
        }
        if self.b <= 0.0 && self.x == 1.0 {
            return Err(BetaError::Divergent { b: self.b });
        }
        Ok(())
    }

    pub fn eval(&self) -> Result<f64, BetaError> {
        inc_beta(self.a, self.b, self.x)
    }
}

fn validate_shapes(a: f64, b: f64) -> Result<(), BetaError> {
    if !(a.is_finite() && a > 0.0) {
        return Err(BetaError::BadShapeA(a));
    }
    if !b.is_finite() {
        return Err(BetaError::BadShapeB(b));
    }
    Ok(())
}

fn quad<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64, BetaError> {
    Ok(quadrature::integrate(
        f,
        lo,
        hi,
        QUAD_ABS_TOL,
        QUAD_REL_TOL,
        0.0,
    )
    .or_else(|err| match err {
        // Accept a stalled refinement when it still meets the contract.
        QuadError::NotConverged { value, error } if error <= INC_BETA_TOL * value.abs().max(1.0) => {
            Ok(value)
        }
        other => Err(other),
    })?)
}

/// `∫_0^y t^(a-1) (1-t)^(b-1) dt` for `y <= 1/2`.
fn lower_part(a: f64, b: f64, y: f64) -> Result<f64, BetaError> {
    if y == 0.0 {
        return Ok(0.0);
    }
    if a < 1.0 {
        // t = u^(1/a) absorbs t^(a-1) dt = du / a.
        let inv_a = 1.0 / a;
        let v = quad(|u: f64| ((-u.powf(inv_a)).ln_1p() * (b - 1.0)).exp(), 0.0, y.powf(a))?;
        Ok(v * inv_a)
    } else {
        quad(|t: f64| integrand(a, b, t), 0.0, y)
    }
}

/// `∫_y^x t^(a-1) (1-t)^(b-1) dt` for `1/2 <= y <= x < 1` (or `x = 1` when `b > 0`).
fn upper_part(a: f64, b: f64, y: f64, x: f64) -> Result<f64, BetaError> {
    if x == y {
        return Ok(0.0);
    }
    // Work in s = 1 - t, exact for t >= 1/2.
    let s_lo = 1.0 - x;
    let s_hi = 1.0 - y;
    if b >= 1.0 {
        quad(|t: f64| integrand(a, b, t), y, x)
    } else if b > 0.0 {
        // s = w^(1/b) absorbs s^(b-1) ds = dw / b.
        let inv_b = 1.0 / b;
        let v = quad(
            |w: f64| ((-w.powf(inv_b)).ln_1p() * (a - 1.0)).exp(),
            s_lo.powf(b),
            s_hi.powf(b),
        )?;
        Ok(v * inv_b)
    } else {
        // s = e^z turns s^(b-1) ds into e^(b z) dz, which is smooth.
        quad(
            |z: f64| ((-z.exp()).ln_1p() * (a - 1.0) + b * z).exp(),
            s_lo.ln(),
            s_hi.ln(),
        )
    }
}

fn integrand(a: f64, b: f64, t: f64) -> f64 {
    ((a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p()).exp()
}

/// Non-regularized lower incomplete beta integral `B_x(a, b)`.
///
/// Requires `a > 0` and `0 <= x <= 1`; `b` may be zero or negative as long
/// as `x < 1`.
pub fn inc_beta(a: f64, b: f64, x: f64) -> Result<f64, BetaError> {
    BetaArgs { a, b, x }.validate()?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= 0.5 {
        return lower_part(a, b, x);
    }
    Ok(lower_part(a, b, 0.5)? + upper_part(a, b, 0.5, x)?)
}

/// Integrand of [`inc_beta`], i.e. `d B_x(a, b) / dx`.
pub fn inc_beta_density(a: f64, b: f64, x: f64) -> f64 {
    integrand(a, b, x)
}

/// Solves `B_x(a, b) = target` for `x` inside `[lo, hi]`.
///
/// Newton steps on the exact derivative, safeguarded by bisection so the
/// bracket always shrinks. The result satisfies
/// `|B_x - target| <= 1e-10 * max(1, target)`.
pub fn inc_beta_inverse(target: f64, a: f64, b: f64, lo: f64, hi: f64) -> Result<f64, BetaError> {
    validate_shapes(a, b)?;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(BetaError::BadBracket { lo, hi });
    }
    if b <= 0.0 && hi == 1.0 {
        return Err(BetaError::Divergent { b });
    }
    let tol = INC_BETA_TOL * target.abs().max(1.0);
    let f_lo = inc_beta(a, b, lo)?;
    let f_hi = inc_beta(a, b, hi)?;
    if !target.is_finite() || target < f_lo - tol || target > f_hi + tol {
        return Err(BetaError::NoRoot { target, low: f_lo, high: f_hi });
    }
    if target <= f_lo {
        return Ok(lo);
    }
    if target >= f_hi {
        return Ok(hi);
    }

    let (mut lo, mut hi) = (lo, hi);
    // Leading-order guess from B_x ~ x^a / a near the origin.
    let mut x = (a * target).powf(1.0 / a);
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    let mut best = (x, f64::INFINITY);
    for _ in 0..400 {
        let r = inc_beta(a, b, x)? - target;
        if r.abs() < best.1.abs() {
            best = (x, r);
        }
        if r == 0.0 {
            return Ok(x);
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
        let slope = inc_beta_density(a, b, x);
        let newton = x - r / slope;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
        x = next;
    }
    let (x, residual) = best;
    if residual.abs() <= tol {
        Ok(x)
    } else {
        Err(BetaError::NotConverged { x, residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_cases() {
        assert_relative_eq!(inc_beta(1.0, 1.0, 0.7).unwrap(), 0.7, epsilon = 1e-14);
        assert_relative_eq!(inc_beta(2.0, 1.0, 1.0).unwrap(), 0.5, epsilon = 1e-14);
        // x^2/2 - x^3/3 at x = 1/2
        assert_relative_eq!(inc_beta(2.0, 2.0, 0.5).unwrap(), 1.0 / 12.0, epsilon = 1e-14);
        assert_eq!(inc_beta(0.3, -0.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn complete_beta_values() {
        // B(1/2, 1/2) = pi, B(0.9, 0.5) = Γ(0.9)Γ(0.5)/Γ(1.4)
        assert_relative_eq!(inc_beta(0.5, 0.5, 1.0).unwrap(), std::f64::consts::PI, max_relative = 1e-13);
        assert_relative_eq!(inc_beta(0.25, 0.75, 1.0).unwrap(), std::f64::consts::PI * 2f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn negative_second_shape() {
        // b = 0: ∫ t^(a-1)/(1-t) with a = 1 is -ln(1 - x)
        assert_relative_eq!(inc_beta(1.0, 0.0, 0.99).unwrap(), -(0.01f64.ln()), max_relative = 1e-13);
        // b = -1, a = 1: ∫ (1-t)^(-2) dt = 1/(1-x) - 1
        assert_relative_eq!(inc_beta(1.0, -1.0, 0.999).unwrap(), 999.0, max_relative = 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(inc_beta(0.0, 1.0, 0.5), Err(BetaError::BadShapeA(0.0)));
        assert_eq!(inc_beta(-1.0, 1.0, 0.5), Err(BetaError::BadShapeA(-1.0)));
        assert_eq!(inc_beta(1.0, 1.0, 1.5), Err(BetaError::OutOfRange(1.5)));
        assert_eq!(inc_beta(1.0, 1.0, -0.1), Err(BetaError::OutOfRange(-0.1)));
        assert_eq!(inc_beta(1.0, 0.0, 1.0), Err(BetaError::Divergent { b: 0.0 }));
        assert!(matches!(inc_beta(1.0, f64::NAN, 0.5), Err(BetaError::BadShapeB(_))));
        assert!(BetaArgs::new(1.0, -0.5, 1.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_relative_eq!(inc_beta_inverse(0.7, 1.0, 1.0, 0.0, 1.0).unwrap(), 0.7, epsilon = 1e-14);
        assert_relative_eq!(inc_beta_inverse(0.5, 2.0, 1.0, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(inc_beta_inverse(1.0 / 12.0, 2.0, 2.0, 0.0, 1.0).unwrap(), 0.5, epsilon = 1e-13);
        assert_relative_eq!(inc_beta_inverse(0.0833333, 2.0, 2.0, 0.0, 1.0).unwrap(), 0.5, epsilon = 1e-6);
    }

    #[test]
    fn inverse_errors() {
        assert!(matches!(inc_beta_inverse(0.9, 2.0, 1.0, 0.0, 1.0), Err(BetaError::NoRoot { .. })));
        assert!(matches!(inc_beta_inverse(-0.1, 2.0, 1.0, 0.0, 1.0), Err(BetaError::NoRoot { .. })));
        assert!(matches!(inc_beta_inverse(0.1, 2.0, 1.0, 0.6, 0.4), Err(BetaError::BadBracket { .. })));
        assert!(matches!(inc_beta_inverse(0.1, 2.0, -1.0, 0.0, 1.0), Err(BetaError::Divergent { .. })));
        assert!(matches!(inc_beta_inverse(0.1, 0.0, 1.0, 0.0, 1.0), Err(BetaError::BadShapeA(_))));
    }

    #[test]
    fn inverse_with_negative_b() {
        let x = inc_beta_inverse(999.0, 1.0, -1.0, 0.0, 0.9999).unwrap();
        assert_relative_eq!(x, 0.999, max_relative = 1e-12);
    }
}
