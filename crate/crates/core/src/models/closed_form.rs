//! Exact solutions for the rows of the unified law that admit one.

use serde::{Deserialize, Serialize};

use super::{GrowthParams, ModelError, ModelKind};
use crate::qcore::{qexp, qexp_is_clamped, qln, BRANCH_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    #[default]
    Ok,
    /// The solution hit a boundary (extinction or carrying capacity reached
    /// in finite time) and was held there.
    Clamped,
    /// The solution has blown up.
    Diverged,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Clamped => "clamped",
            PointStatus::Diverged => "diverged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub value: f64,
    pub status: PointStatus,
}

impl Point {
    pub fn ok(value: f64) -> Self {
        Point { value, status: PointStatus::Ok }
    }

    fn classify(value: f64, clamped: bool) -> Self {
        let status = if value.is_infinite() || value.is_nan() {
            PointStatus::Diverged
        } else if clamped || value == 0.0 {
            PointStatus::Clamped
        } else {
            PointStatus::Ok
        };
        let value = if value.is_nan() { f64::INFINITY } else { value };
        Point { value, status }
    }
}

fn check_p0(p0: f64) -> Result<(), ModelError> {
    if p0 > 0.0 && p0.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParam { name: "p0", value: p0, reason: "must be positive and finite" })
    }
}

pub fn malthus_solution(kappa: f64, p0: f64, t: f64) -> Point {
    Point::classify(p0 * (kappa * t).exp(), false)
}

/// `1 / (1 + (1/p0 − 1) e^{−κt})`; blows up for `κ < 0, p0 > 1`.
pub fn logistic_solution(kappa: f64, p0: f64, t: f64) -> Point {
    if t == 0.0 {
        return Point::ok(p0);
    }
    let denom = 1.0 + (1.0 / p0 - 1.0) * (-kappa * t).exp();
    if denom <= 0.0 {
        return Point { value: f64::INFINITY, status: PointStatus::Diverged };
    }
    Point::classify(1.0 / denom, false)
}

/// `p0^{e^{−κt}}`.
pub fn gompertz_solution(kappa: f64, p0: f64, t: f64) -> Point {
    Point::classify((p0.ln() * (-kappa * t).exp()).exp(), false)
}

/// `1 − (1 − p0) e^{−κt}`, which may cross zero for `p0 > 1, κ < 0`.
pub fn mitscherlich_solution(kappa: f64, p0: f64, t: f64) -> Point {
    let p = 1.0 - (1.0 - p0) * (-kappa * t).exp();
    if p <= 0.0 {
        return Point { value: 0.0, status: PointStatus::Clamped };
    }
    Point::classify(p, false)
}

/// `e_{−q}[ln_{−q}(p0) e^{−κt}]`.
pub fn richards_solution(q: f64, kappa: f64, p0: f64, t: f64) -> Result<Point, ModelError> {
    check_p0(p0)?;
    if t == 0.0 {
        return Ok(Point::ok(p0));
    }
    if q.abs() < BRANCH_THRESHOLD {
        return Ok(gompertz_solution(kappa, p0, t));
    }
    let arg = qln(-q, p0)? * (-kappa * t).exp();
    Ok(Point::classify(qexp(-q, arg)?, qexp_is_clamped(-q, arg)))
}

/// Richards law with a constant effort on the relative rate,
/// `d ln p/dt = −κ ln_q p + ε`. The population saturates at
/// `c = e_q(ε/κ)` with rate `κ + qε`.
pub fn schaefer_solution(
    q: f64,
    kappa: f64,
    effort: f64,
    p0: f64,
    t: f64,
) -> Result<Point, ModelError> {
    check_p0(p0)?;
    if t == 0.0 {
        return Ok(Point::ok(p0));
    }
    if effort == 0.0 {
        return richards_solution(q, kappa, p0, t);
    }
    if kappa == 0.0 {
        return Ok(malthus_solution(effort, p0, t));
    }
    let ratio = effort / kappa;
    let c = qexp(q, ratio)?;
    if qexp_is_clamped(q, ratio) || !(c > 0.0 && c.is_finite()) {
        return Err(ModelError::Domain { p: p0, reason: "e_q(epsilon/kappa) leaves (0, inf)" });
    }
    let rate = if q.abs() < BRANCH_THRESHOLD { kappa } else { kappa + q * effort };
    let arg = -qln(q, c / p0)? * (-rate * t).exp();
    let p = c * qexp(-q, arg)?;
    Ok(Point::classify(p, qexp_is_clamped(-q, arg)))
}

/// `e_q[ln_q(p0) e^{−κt}]`, solving `d ln_q p/dt = −κ ln_q p`.
pub fn gvb_solution(q: f64, kappa: f64, p0: f64, t: f64) -> Result<Point, ModelError> {
    check_p0(p0)?;
    if t == 0.0 {
        return Ok(Point::ok(p0));
    }
    let arg = qln(q, p0)? * (-kappa * t).exp();
    Ok(Point::classify(qexp(q, arg)?, qexp_is_clamped(q, arg)))
}

/// Solution of `d ln p/dt = κ(−ln p)^γ`.
///
/// With `y = −ln p` the law becomes `dy/dt = −κ y^γ`, so
/// `p = exp(−y0 e_{1−γ}(−κt / y0^{1−γ}))`. `γ = 0` is plain exponential
/// growth and `γ = 1` is Gompertz.
pub fn hyper_gompertz_solution(gamma: f64, kappa: f64, p0: f64, t: f64) -> Result<Point, ModelError> {
    check_p0(p0)?;
    if t == 0.0 {
        return Ok(Point::ok(p0));
    }
    if gamma == 0.0 {
        return Ok(malthus_solution(kappa, p0, t));
    }
    if gamma == 1.0 {
        return Ok(gompertz_solution(kappa, p0, t));
    }
    if p0 >= 1.0 {
        return Err(ModelError::InvalidParam { name: "p0", value: p0, reason: "hyper-Gompertz needs p0 < 1" });
    }
    let y0 = -p0.ln();
    let arg = -kappa * t / y0.powf(1.0 - gamma);
    let inner = qexp(1.0 - gamma, arg)?;
    let p = (-y0 * inner).exp();
    Ok(Point::classify(p, qexp_is_clamped(1.0 - gamma, arg)))
}

/// Solution of `d ln p/dt = κ p^{q(1−γ)} (−ln_q p)^γ`.
///
/// `w = ln_q(1/p)` obeys `dw/dt = −κ w^γ`, which gives
/// `p = e_{−q}{ln_{−q}(p0) e_{1−γ}[−κt w0^{γ−1}]}`.
pub fn turner_solution(q: f64, gamma: f64, kappa: f64, p0: f64, t: f64) -> Result<Point, ModelError> {
    check_p0(p0)?;
    if t == 0.0 {
        return Ok(Point::ok(p0));
    }
    if gamma == 1.0 {
        return richards_solution(q, kappa, p0, t);
    }
    if p0 >= 1.0 {
        return Err(ModelError::InvalidParam { name: "p0", value: p0, reason: "Turner needs p0 < 1" });
    }
    let w0 = qln(q, 1.0 / p0)?;
    let arg = -kappa * t * w0.powf(gamma - 1.0);
    let inner = qexp(1.0 - gamma, arg)?;
    let outer = qln(-q, p0)? * inner;
    let p = qexp(-q, outer)?;
    let clamped = qexp_is_clamped(1.0 - gamma, arg) || qexp_is_clamped(-q, outer);
    Ok(Point::classify(p, clamped))
}

/// `y0 e_q(k x / y0^q)`, solving `dy/dx = k y^{1−q}`.
pub fn kinetic_solution(q: f64, k: f64, y0: f64, x: f64) -> Result<Point, ModelError> {
    check_p0(y0)?;
    if x == 0.0 {
        return Ok(Point::ok(y0));
    }
    let arg = k * x / y0.powf(q);
    Ok(Point::classify(y0 * qexp(q, arg)?, qexp_is_clamped(q, arg)))
}

/// Blow-up time of the logistic law with a repelling capacity.
pub fn divergence_time(kappa: f64, p0: f64) -> Result<f64, ModelError> {
    richards_divergence_time(1.0, kappa, p0)
}

/// Blow-up time `ln(1 − p0^{−q}) / κ` of the Richards law for `κ < 0`,
/// `p0 > 1`, `q > 0`.
pub fn richards_divergence_time(q: f64, kappa: f64, p0: f64) -> Result<f64, ModelError> {
    if !(kappa < 0.0) {
        return Err(ModelError::InvalidParam { name: "kappa", value: kappa, reason: "blow-up needs kappa < 0" });
    }
    if !(p0 > 1.0 && p0.is_finite()) {
        return Err(ModelError::InvalidParam { name: "p0", value: p0, reason: "blow-up needs p0 > 1" });
    }
    if !(q >= BRANCH_THRESHOLD) {
        return Err(ModelError::InvalidParam { name: "q", value: q, reason: "blow-up in finite time needs q > 0" });
    }
    Ok((-(-q * p0.ln()).exp_m1()).ln() / kappa)
}

/// Whether `kind` has an exact solution for these parameters.
pub fn has_closed_form(kind: ModelKind, params: &GrowthParams) -> bool {
    use ModelKind::*;
    match kind {
        Malthus | Verhulst | Gompertz | Richards | RichardsSchaefer | Mitscherlich
        | SpecializedVonBertalanffy | GeneralizedVonBertalanffy | ZipfMandelbrotKinetic => true,
        HyperGompertz => params.gamma == 0.0 || params.gamma == 1.0 || params.p0 < 1.0,
        Turner => params.gamma == 1.0 || params.p0 < 1.0,
        Blumberg | MarusicBajzer | TsoularisWallace | SmithApprox => false,
    }
}

/// Exact value at time `t` for rows with a closed form, `None` otherwise.
pub fn closed_form(kind: ModelKind, params: &GrowthParams, t: f64) -> Option<Result<Point, ModelError>> {
    use ModelKind::*;
    if !has_closed_form(kind, params) {
        return None;
    }
    let GrowthParams { q_prime, q, gamma, kappa, effort, p0 } = *params;
    if t == 0.0 {
        return Some(Ok(Point::ok(p0)));
    }
    Some(match kind {
        Malthus => Ok(malthus_solution(kappa + effort, p0, t)),
        Verhulst => Ok(logistic_solution(kappa, p0, t)),
        Gompertz => Ok(gompertz_solution(kappa, p0, t)),
        Mitscherlich => Ok(mitscherlich_solution(kappa, p0, t)),
        Richards => richards_solution(q, kappa, p0, t),
        RichardsSchaefer => schaefer_solution(q, kappa, effort, p0, t),
        SpecializedVonBertalanffy | GeneralizedVonBertalanffy => gvb_solution(q, kappa, p0, t),
        HyperGompertz => hyper_gompertz_solution(gamma, kappa, p0, t),
        Turner => turner_solution(q, gamma, kappa, p0, t),
        ZipfMandelbrotKinetic => kinetic_solution(q_prime, kappa, p0, t),
        Blumberg | MarusicBajzer | TsoularisWallace | SmithApprox => unreachable!(),
    })
}
