//! The one-parameter deformed logarithm `ln_q(x) = (x^q - 1)/q` and its inverse,
//! the deformed exponential `e_q(x) = [1 + q x]_+^{1/q}`.
//!
//! Both reduce to the natural pair as `q -> 0`. Away from that limit they are
//! evaluated through `expm1`/`log1p` so that small `q` keeps full precision.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Below this magnitude the deformation is treated as exactly zero.
pub const BRANCH_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("deformed logarithm needs x > 0, got {0}")]
    NonPositive(f64),
    #[error("deformed exponential clamps: 1 + q*x <= 0 for q = {q}, x = {x}")]
    Clamped { q: f64, x: f64 },
}

fn finite(what: &'static str, value: f64) -> Result<f64, QError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QError::NonFinite { what, value })
    }
}

/// The deformation parameter `q`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Deformation(f64);

impl Deformation {
    pub const ZERO: Deformation = Deformation(0.0);

    pub fn new(q: f64) -> Result<Self, QError> {
        finite("deformation", q).map(Deformation)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when the parameter is inside the `q -> 0` branch.
    pub fn is_ordinary(self) -> bool {
        self.0.abs() < BRANCH_THRESHOLD
    }

    pub fn ln(self, x: f64) -> Result<f64, QError> {
        qln(self.0, x)
    }

    pub fn exp(self, x: f64) -> Result<f64, QError> {
        qexp(self.0, x)
    }

    pub fn exp_strict(self, x: f64) -> Result<f64, QError> {
        qexp_strict(self.0, x)
    }

    pub fn clamp_boundary(self) -> f64 {
        qexp_clamp_boundary(self.0)
    }

    pub fn support(self) -> (f64, f64) {
        qexp_support(self.0)
    }
}

impl TryFrom<f64> for Deformation {
    type Error = QError;

    fn try_from(q: f64) -> Result<Self, Self::Error> {
        Deformation::new(q)
    }
}

impl From<Deformation> for f64 {
    fn from(q: Deformation) -> f64 {
        q.0
    }
}

/// Deformed logarithm `ln_q(x)`: the area under `t^{q-1}` on `[1, x]`.
///
/// Negative for `x < 1`, zero at `x = 1` and positive for `x > 1`, for every `q`.
pub fn qln(q: f64, x: f64) -> Result<f64, QError> {
    let q = finite("deformation", q)?;
    let x = finite("argument", x)?;
    if x <= 0.0 {
        return Err(QError::NonPositive(x));
    }
    if q.abs() < BRANCH_THRESHOLD {
        return Ok(x.ln());
    }
    Ok((q * x.ln()).exp_m1() / q)
}

/// Deformed exponential `e_q(x)`, the inverse of [`qln`].
///
/// Outside the support (`1 + q x <= 0`) the clamp `[a]_+ = max(a, 0)` applies:
/// the result is `0` for `q > 0` and `+inf` for `q < 0`, where the negative
/// power of zero diverges.
pub fn qexp(q: f64, x: f64) -> Result<f64, QError> {
    let q = finite("deformation", q)?;
    let x = finite("argument", x)?;
    if q.abs() < BRANCH_THRESHOLD {
        return Ok(x.exp());
    }
    let qx = q * x;
    if qx <= -1.0 {
        return Ok(if q > 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((qx.ln_1p() / q).exp())
}

/// Like [`qexp`], but clamping is reported as [`QError::Clamped`].
pub fn qexp_strict(q: f64, x: f64) -> Result<f64, QError> {
    if qexp_is_clamped(q, x) {
        return Err(QError::Clamped { q, x });
    }
    qexp(q, x)
}

/// Whether `e_q(x)` falls in the clamped region `1 + q x <= 0`.
pub fn qexp_is_clamped(q: f64, x: f64) -> bool {
    q.abs() >= BRANCH_THRESHOLD && q * x <= -1.0
}

/// Infimum of the support of `e_q` for `q > 0`, i.e. `-1/q`.
///
/// For `q <= 0` the exponential never clamps from below and `-inf` is
/// returned. Negative `q` has an upper blow-up point instead; see
/// [`qexp_support`].
pub fn qexp_clamp_boundary(q: f64) -> f64 {
    if q >= BRANCH_THRESHOLD {
        -1.0 / q
    } else {
        f64::NEG_INFINITY
    }
}

/// Open interval `(lower, upper)` on which `e_q` is positive and finite.
pub fn qexp_support(q: f64) -> (f64, f64) {
    if q >= BRANCH_THRESHOLD {
        (-1.0 / q, f64::INFINITY)
    } else if q <= -BRANCH_THRESHOLD {
        (f64::NEG_INFINITY, -1.0 / q)
    } else {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}
