//! The unified growth law and the family of models it contains.
//!
//! Every model is an instance of
//!
//! ```text
//! d ln_{q'} p / dt = κ (−ln_q p)^γ + ε
//! ```
//!
//! for the normalized population `p = n / n_∞`, with the effort term `ε`
//! acting on the relative growth rate (`ε < 0` removes individuals).

mod closed_form;
mod marusic;
mod microscopic;
mod table;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{qln, QError};

pub use closed_form::{
    closed_form, divergence_time, gompertz_solution, gvb_solution, has_closed_form,
    hyper_gompertz_solution, kinetic_solution, logistic_solution, malthus_solution,
    mitscherlich_solution, richards_divergence_time, richards_solution, schaefer_solution,
    turner_solution, Point, PointStatus,
};
pub use marusic::{marusic_map, marusic_normalizer};
pub use microscopic::{microscopic_qtilde, MicroRegime, MicroscopicParams};
pub use table::{
    model_table, table_rows, tsoularis_kappa_from_r, ModelKind, ParamMap, TableRow, DEFAULT_P0,
    SMITH_QPRIME,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Deformation(#[from] QError),
    #[error("unknown model kind '{0}'")]
    UnknownKind(String),
    #[error("{kind}: missing parameter '{name}'")]
    MissingParam { kind: ModelKind, name: String },
    #[error("{kind}: parameter '{name}' is not a free slot of this row")]
    ExtraParam { kind: ModelKind, name: String },
    #[error("{kind}: give either 'r' or 'kappa', not both")]
    ConflictingRate { kind: ModelKind },
    #[error("parameter {name} = {value}: {reason}")]
    InvalidParam { name: &'static str, value: f64, reason: &'static str },
    #[error("domain error at p = {p}: {reason}")]
    Domain { p: f64, reason: &'static str },
    #[error("degenerate mapping: {0}")]
    Degenerate(&'static str),
}

pub(crate) fn is_integer(x: f64) -> bool {
    x.fract() == 0.0
}

/// Parameters of the unified growth law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GrowthParams {
    #[serde(rename = "qprime")]
    q_prime: f64,
    q: f64,
    gamma: f64,
    kappa: f64,
    #[serde(rename = "epsilon")]
    effort: f64,
    p0: f64,
}

#[derive(Deserialize)]
struct RawParams {
    qprime: f64,
    q: f64,
    gamma: f64,
    kappa: f64,
    #[serde(default)]
    epsilon: f64,
    p0: f64,
}

impl TryFrom<RawParams> for GrowthParams {
    type Error = ModelError;

    fn try_from(r: RawParams) -> Result<Self, Self::Error> {
        GrowthParams::new(r.qprime, r.q, r.gamma, r.kappa, r.epsilon, r.p0)
    }
}

impl GrowthParams {
    pub fn new(
        q_prime: f64,
        q: f64,
        gamma: f64,
        kappa: f64,
        effort: f64,
        p0: f64,
    ) -> Result<Self, ModelError> {
        for (name, value) in [
            ("qprime", q_prime),
            ("q", q),
            ("gamma", gamma),
            ("kappa", kappa),
            ("epsilon", effort),
            ("p0", p0),
        ] {
            if !value.is_finite() {
                return Err(ModelError::InvalidParam { name, value, reason: "must be finite" });
            }
        }
        if p0 <= 0.0 {
            return Err(ModelError::InvalidParam { name: "p0", value: p0, reason: "must be positive" });
        }
        let base = -qln(q, p0)?;
        if base < 0.0 && !is_integer(gamma) {
            return Err(ModelError::InvalidParam {
                name: "p0",
                value: p0,
                reason: "p0 > 1 makes (-ln_q p0)^gamma complex for non-integer gamma",
            });
        }
        if base == 0.0 && gamma < 0.0 {
            return Err(ModelError::InvalidParam {
                name: "p0",
                value: p0,
                reason: "p0 = 1 with negative gamma gives an infinite rate",
            });
        }
        Ok(GrowthParams { q_prime, q, gamma, kappa, effort, p0 })
    }

    pub fn q_prime(&self) -> f64 {
        self.q_prime
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn effort(&self) -> f64 {
        self.effort
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// Exponent of `p` in the Tsoularis-Wallace saturation function, `1 − q'`.
    pub fn alpha(&self) -> f64 {
        1.0 - self.q_prime
    }

    pub fn with_p0(&self, p0: f64) -> Result<Self, ModelError> {
        GrowthParams::new(self.q_prime, self.q, self.gamma, self.kappa, self.effort, p0)
    }

    /// Whether `(−ln_q p)^γ` is undefined past `p = 1`.
    pub fn bounded_by_capacity(&self) -> bool {
        !is_integer(self.gamma)
    }
}

/// Relative growth rate `d ln p / dt = κ p^{−q'} (−ln_q p)^γ + ε`.
pub fn saturation_rate(params: &GrowthParams, p: f64) -> Result<f64, ModelError> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(ModelError::Domain { p, reason: "population must be positive and finite" });
    }
    let base = -qln(params.q, p)?;
    let saturation = if params.gamma == 0.0 {
        1.0
    } else if base < 0.0 && !is_integer(params.gamma) {
        return Err(ModelError::Domain {
            p,
            reason: "(-ln_q p)^gamma is complex above carrying capacity for non-integer gamma",
        });
    } else {
        base.powf(params.gamma)
    };
    if !saturation.is_finite() {
        return Err(ModelError::Domain { p, reason: "saturation term is infinite" });
    }
    Ok(params.kappa * p.powf(-params.q_prime) * saturation + params.effort)
}

/// Absolute growth rate `dp/dt = p · G(p)`.
pub fn rhs_dp_dt(params: &GrowthParams, p: f64) -> Result<f64, ModelError> {
    Ok(p * saturation_rate(params, p)?)
}

/// Right-hand side of the unified law written with a second deformed
/// logarithm, `κγ ln_γ(−ln_q p) + κ`: the exponent `γ` then acts like an
/// effort rate `−κ`. Equal to `κ (−ln_q p)^γ` wherever both are defined.
pub fn effort_form_rate(kappa: f64, q: f64, gamma: f64, p: f64) -> Result<f64, ModelError> {
    let base = -qln(q, p)?;
    if base <= 0.0 {
        return Err(ModelError::Domain { p, reason: "ln_gamma needs -ln_q p > 0" });
    }
    Ok(kappa * gamma * qln(gamma, base)? + kappa)
}

/// Exact right-hand side of Smith's model,
/// `dp/dt = r p (1 − p) / (1 + r a p)`, for numerical integration.
pub fn smith_exact_rhs(r: f64, a: f64) -> impl Fn(f64) -> Result<f64, ModelError> {
    move |p: f64| {
        let denom = 1.0 + r * a * p;
        if denom <= 0.0 {
            return Err(ModelError::Domain { p, reason: "1 + r a p must stay positive" });
        }
        Ok(r * p * (1.0 - p) / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(q_prime: f64, q: f64, gamma: f64, kappa: f64) -> GrowthParams {
        GrowthParams::new(q_prime, q, gamma, kappa, 0.0, 0.01).unwrap()
    }

    #[test]
    fn table_row_rates() {
        // Malthus: d ln p/dt = r
        assert_relative_eq!(saturation_rate(&params(0.0, 0.7, 0.0, 1.0), 0.3).unwrap(), 1.0);
        // Verhulst: r (1 - p)
        assert_relative_eq!(saturation_rate(&params(0.0, 1.0, 1.0, 1.0), 0.25).unwrap(), 0.75, epsilon = 1e-15);
        // Gompertz: -κ ln p
        let e_inv = (-1.0f64).exp();
        assert_relative_eq!(saturation_rate(&params(0.0, 0.0, 1.0, 1.0), e_inv).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn absolute_rates() {
        // Mitscherlich: dp/dt = κ (1 - p)
        assert_relative_eq!(rhs_dp_dt(&params(1.0, 1.0, 1.0, 1.0), 0.4).unwrap(), 0.6, epsilon = 1e-15);
        assert_eq!(rhs_dp_dt(&params(0.0, 1.0, 1.0, 1.0), 1.0).unwrap(), 0.0);
        assert_eq!(rhs_dp_dt(&params(0.0, 0.5, 1.0, 1.0), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn effort_shifts_relative_rate() {
        let p = GrowthParams::new(0.0, 2.0, 1.0, 1.0, -0.1, 0.01).unwrap();
        let g = saturation_rate(&p, 0.5).unwrap();
        assert_relative_eq!(g, (1.0 - 0.25) / 2.0 - 0.1, epsilon = 1e-15);
        // Stationary at p = e_q(ε/κ)
        assert!(rhs_dp_dt(&p, 0.8f64.sqrt()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn complex_power_rejected() {
        let p = params(0.0, 1.0, 0.5, 1.0);
        assert!(matches!(saturation_rate(&p, 1.2), Err(ModelError::Domain { .. })));
        assert!(matches!(saturation_rate(&p, 0.0), Err(ModelError::Domain { .. })));
        // integer gamma is fine past capacity
        assert!(saturation_rate(&params(0.0, 1.0, 2.0, 1.0), 1.2).is_ok());
    }

    #[test]
    fn construction_checks() {
        assert!(GrowthParams::new(0.0, 1.0, 0.5, 1.0, 0.0, 1.5).is_err());
        assert!(GrowthParams::new(0.0, 1.0, 1.0, 1.0, 0.0, 1.5).is_ok());
        assert!(GrowthParams::new(0.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(GrowthParams::new(0.0, f64::NAN, 1.0, 1.0, 0.0, 0.5).is_err());
        assert!(GrowthParams::new(0.0, 1.0, -1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn serde_round_trip_validates() {
        let p = GrowthParams::new(0.25, 1.5, 0.5, 2.0, -0.1, 0.2).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"qprime\":0.25"));
        let back: GrowthParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"qprime":0,"q":1,"gamma":0.5,"kappa":1,"epsilon":0,"p0":2}"#;
        assert!(serde_json::from_str::<GrowthParams>(bad).is_err());
    }

    #[test]
    fn smith_rhs_matches_verhulst_at_zero_delay() {
        let f = smith_exact_rhs(1.5, 0.0);
        let verhulst = params(0.0, 1.0, 1.0, 1.5);
        for p in [0.1, 0.5, 0.9] {
            assert_relative_eq!(f(p).unwrap(), rhs_dp_dt(&verhulst, p).unwrap(), epsilon = 1e-15);
        }
        assert!(smith_exact_rhs(1.0, -2.0)(0.9).is_err());
    }

    proptest! {
        #[test]
        fn effort_rewrite_identity(q in -2.0f64..2.0, gamma in 0.1f64..3.0, kappa in 0.1f64..5.0, p in 0.001f64..0.999) {
            let direct = kappa * (-qln(q, p).unwrap()).powf(gamma);
            let rewritten = effort_form_rate(kappa, q, gamma, p).unwrap();
            prop_assert!((direct - rewritten).abs() <= 1e-10 * direct.abs().max(1.0));
        }

        #[test]
        fn stationary_at_capacity(q_prime in -2.0f64..2.0, q in -2.0f64..2.0, gamma in 0.01f64..3.0, kappa in -3.0f64..3.0) {
            let p = GrowthParams::new(q_prime, q, gamma, kappa, 0.0, 0.5).unwrap();
            prop_assert_eq!(rhs_dp_dt(&p, 1.0).unwrap(), 0.0);
        }
    }
}
