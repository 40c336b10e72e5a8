//! The two-power law `dy/dx = a y^α + b y^β` in canonical form.

use super::{GrowthParams, ModelError, DEFAULT_P0};
use crate::qcore::BRANCH_THRESHOLD;

fn shapes(a: f64, b: f64, alpha: f64, beta: f64) -> Result<(f64, f64, f64), ModelError> {
    for (name, value) in [("a", a), ("b", b), ("alpha", alpha), ("beta", beta)] {
        if !value.is_finite() {
            return Err(ModelError::InvalidParam { name, value, reason: "must be finite" });
        }
    }
    let q_prime = alpha - 1.0;
    let q = alpha - beta;
    if q.abs() < BRANCH_THRESHOLD {
        // Both terms share one power: dy/dx = (a + b) y^α, a kinetic law
        // without a finite capacity.
        return Err(ModelError::Degenerate("alpha = beta leaves no carrying capacity"));
    }
    if a == 0.0 {
        return Err(ModelError::InvalidParam { name: "a", value: a, reason: "must be non-zero" });
    }
    let ratio = -b / a;
    if !(ratio > 0.0) {
        return Err(ModelError::InvalidParam {
            name: "b",
            value: b,
            reason: "a and b must have opposite signs for a finite capacity",
        });
    }
    Ok((q_prime, q, ratio))
}

/// Scale `c = (a / −b)^{1/q}` such that `p = 1 / (c y)`.
pub fn marusic_normalizer(a: f64, b: f64, alpha: f64, beta: f64) -> Result<f64, ModelError> {
    let (_, q, ratio) = shapes(a, b, alpha, beta)?;
    Ok(ratio.powf(-1.0 / q))
}

/// Canonical parameters of `dy/dx = a y^α + b y^β` in the variable
/// `p = 1 / (c y)`: `q' = α − 1`, `q = α − β`, `γ = 1` and
/// `κ = −a q (−b/a)^{q'/q}`.
///
/// `p0` is [`DEFAULT_P0`]; convert a known `y0` with
/// [`marusic_normalizer`] and [`GrowthParams::with_p0`].
pub fn marusic_map(a: f64, b: f64, alpha: f64, beta: f64) -> Result<GrowthParams, ModelError> {
    let (q_prime, q, ratio) = shapes(a, b, alpha, beta)?;
    let kappa = -a * q * ratio.powf(q_prime / q);
    GrowthParams::new(q_prime, q, 1.0, kappa, 0.0, DEFAULT_P0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::rhs_dp_dt;
    use approx::assert_relative_eq;

    // dp/dt from the original equation through p = 1/(c y)
    fn mapped_rate(a: f64, b: f64, alpha: f64, beta: f64, p: f64) -> f64 {
        let c = marusic_normalizer(a, b, alpha, beta).unwrap();
        let y = 1.0 / (c * p);
        let dy = a * y.powf(alpha) + b * y.powf(beta);
        -c * p * p * dy
    }

    #[test]
    fn map_reproduces_original_dynamics() {
        for &(a, b, alpha, beta) in &[
            (-1.0, 2.0, 1.0, 0.5),
            (-0.5, 0.7, 4.0 / 3.0, 1.0),
            (2.0, -1.0, 1.2, 2.0),
            (-1.5, 0.3, 0.8, -0.4),
        ] {
            let params = marusic_map(a, b, alpha, beta).unwrap();
            for p in [0.05, 0.3, 0.8] {
                let canonical = rhs_dp_dt(&params, p).unwrap();
                assert_relative_eq!(canonical, mapped_rate(a, b, alpha, beta, p), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn named_reductions() {
        let r = marusic_map(-1.0, 3.0, 1.0, 0.5).unwrap();
        assert_eq!((r.q_prime(), r.q(), r.gamma()), (0.0, 0.5, 1.0));
        let svb = marusic_map(-1.0, 3.0, 4.0 / 3.0, 1.0).unwrap();
        assert_relative_eq!(svb.q_prime(), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(svb.q(), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_and_domain() {
        assert!(matches!(marusic_map(-1.0, 2.0, 1.5, 1.5), Err(ModelError::Degenerate(_))));
        assert!(marusic_map(1.0, 2.0, 1.0, 0.5).is_err());
        assert!(marusic_map(0.0, 2.0, 1.0, 0.5).is_err());
    }
}
