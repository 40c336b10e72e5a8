//! Deformation parameter from interacting cells on a fractal support.

use serde::{Deserialize, Serialize};

use super::{GrowthParams, ModelError};
use crate::qcore::{qln, BRANCH_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroscopicParams {
    /// Decay exponent of the cell-cell interaction with distance.
    pub gamma_int: f64,
    /// Fractal dimension of the cell cluster.
    pub d_f: f64,
    /// Mean intrinsic replication rate.
    pub mean_g: f64,
    pub j_coupling: f64,
    /// Geometry constant.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MicroRegime {
    Verhulst,
    Richards,
    Gompertz,
    ExponentialTail,
    Mitscherlich,
}

impl MicroscopicParams {
    fn check(&self) -> Result<(), ModelError> {
        if !(self.d_f > 0.0 && self.d_f.is_finite()) {
            return Err(ModelError::InvalidParam { name: "d_f", value: self.d_f, reason: "must be positive" });
        }
        if !(self.gamma_int >= 0.0 && self.gamma_int.is_finite()) {
            return Err(ModelError::InvalidParam {
                name: "gamma_int",
                value: self.gamma_int,
                reason: "must be non-negative",
            });
        }
        Ok(())
    }

    /// `d ln n/dt = ⟨G⟩ − J ω ln_q(D_f n / ω)`.
    pub fn log_rate(&self, n: f64) -> Result<f64, ModelError> {
        self.check()?;
        let (q, _) = microscopic_qtilde(self)?;
        Ok(self.mean_g - self.j_coupling * self.omega * qln(q, self.d_f * n / self.omega)?)
    }

    /// The same law as a Richards model with effort, in `p = D_f n / ω`
    /// with `κ = J ω` and `ε = ⟨G⟩`.
    pub fn growth_params(&self, n0: f64) -> Result<GrowthParams, ModelError> {
        if !(self.omega > 0.0) {
            return Err(ModelError::InvalidParam { name: "omega", value: self.omega, reason: "must be positive" });
        }
        let (q, _) = microscopic_qtilde(self)?;
        GrowthParams::new(0.0, q, 1.0, self.j_coupling * self.omega, self.mean_g, self.d_f * n0 / self.omega)
    }
}

/// `q = 1 − γ_int / D_f` and the named model it corresponds to.
pub fn microscopic_qtilde(mp: &MicroscopicParams) -> Result<(f64, MicroRegime), ModelError> {
    mp.check()?;
    let q = 1.0 - mp.gamma_int / mp.d_f;
    let near = |target: f64| (q - target).abs() < BRANCH_THRESHOLD;
    let regime = if near(1.0) {
        MicroRegime::Verhulst
    } else if near(0.0) {
        MicroRegime::Gompertz
    } else if near(-1.0) {
        MicroRegime::Mitscherlich
    } else if q < 0.0 {
        MicroRegime::ExponentialTail
    } else {
        MicroRegime::Richards
    };
    Ok((q, regime))
}
