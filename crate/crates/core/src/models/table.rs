//! Named rows of the unified law and the binding of their free slots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{is_integer, GrowthParams, ModelError};
use crate::qcore::BRANCH_THRESHOLD;

pub type ParamMap = BTreeMap<String, f64>;

/// Initial population used when a parameter map leaves `p0` out.
pub const DEFAULT_P0: f64 = 0.001;

/// `q'` of the Smith row, `1 − 0.473`.
pub const SMITH_QPRIME: f64 = 1.0 - 0.473;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    Malthus,
    Verhulst,
    Gompertz,
    HyperGompertz,
    Richards,
    RichardsSchaefer,
    Mitscherlich,
    Blumberg,
    Turner,
    SpecializedVonBertalanffy,
    GeneralizedVonBertalanffy,
    MarusicBajzer,
    TsoularisWallace,
    ZipfMandelbrotKinetic,
    SmithApprox,
}

/// How a row's rate slot may be given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rate {
    KappaOnly,
    /// `r` or `kappa`, with `κ = r`.
    Direct,
    /// `r` or `kappa`, with `κ = r q`.
    TimesQ,
    /// `r` or `kappa`, with `κ = r q^γ`.
    TimesQPowGamma,
}

impl ModelKind {
    pub const ALL: [ModelKind; 15] = [
        ModelKind::Malthus,
        ModelKind::Verhulst,
        ModelKind::Gompertz,
        ModelKind::HyperGompertz,
        ModelKind::Richards,
        ModelKind::RichardsSchaefer,
        ModelKind::Mitscherlich,
        ModelKind::Blumberg,
        ModelKind::Turner,
        ModelKind::SpecializedVonBertalanffy,
        ModelKind::GeneralizedVonBertalanffy,
        ModelKind::MarusicBajzer,
        ModelKind::TsoularisWallace,
        ModelKind::ZipfMandelbrotKinetic,
        ModelKind::SmithApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Malthus => "Malthus",
            ModelKind::Verhulst => "Verhulst",
            ModelKind::Gompertz => "Gompertz",
            ModelKind::HyperGompertz => "HyperGompertz",
            ModelKind::Richards => "Richards",
            ModelKind::RichardsSchaefer => "RichardsSchaefer",
            ModelKind::Mitscherlich => "Mitscherlich",
            ModelKind::Blumberg => "Blumberg",
            ModelKind::Turner => "Turner",
            ModelKind::SpecializedVonBertalanffy => "SpecializedVonBertalanffy",
            ModelKind::GeneralizedVonBertalanffy => "GeneralizedVonBertalanffy",
            ModelKind::MarusicBajzer => "MarusicBajzer",
            ModelKind::TsoularisWallace => "TsoularisWallace",
            ModelKind::ZipfMandelbrotKinetic => "ZipfMandelbrotKinetic",
            ModelKind::SmithApprox => "SmithApprox",
        }
    }

    /// Rows of the classic model table; the effort-rate and kinetic
    /// variants are extensions.
    pub fn in_table(self) -> bool {
        !matches!(self, ModelKind::RichardsSchaefer | ModelKind::ZipfMandelbrotKinetic)
    }

    fn rate(self) -> Rate {
        match self {
            ModelKind::Malthus | ModelKind::Verhulst => Rate::Direct,
            ModelKind::Richards => Rate::TimesQ,
            ModelKind::TsoularisWallace => Rate::TimesQPowGamma,
            _ => Rate::KappaOnly,
        }
    }

    /// Shape slots (everything but the rate and `p0`) a row requires.
    fn shape_slots(self) -> &'static [&'static str] {
        match self {
            ModelKind::HyperGompertz => &["gamma"],
            ModelKind::Richards | ModelKind::GeneralizedVonBertalanffy => &["q"],
            ModelKind::RichardsSchaefer => &["q", "epsilon"],
            ModelKind::Blumberg => &["qprime", "gamma"],
            ModelKind::Turner => &["q", "gamma"],
            ModelKind::MarusicBajzer => &["qprime", "q"],
            ModelKind::TsoularisWallace => &["qprime", "q", "gamma"],
            ModelKind::ZipfMandelbrotKinetic => &["qprime"],
            _ => &[],
        }
    }

    /// Names accepted by [`model_table`] for this row, `p0` included.
    pub fn parameter_names(self) -> Vec<&'static str> {
        let mut names = self.shape_slots().to_vec();
        if self.rate() != Rate::KappaOnly {
            names.push("r");
        }
        names.push("kappa");
        if self == ModelKind::Malthus {
            names.push("q");
        }
        names.push("p0");
        names
    }

    /// Slots estimated by default when fitting, in the canonical
    /// `kappa`-based form.
    pub fn free_slots(self) -> Vec<&'static str> {
        let mut names = self.shape_slots().to_vec();
        names.push("kappa");
        names
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

impl FromStr for ModelKind {
    type Err = ModelError;

    /// Case, spaces, dashes and underscores are ignored, and a few common
    /// aliases are understood.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = normalize(s);
        let alias = match key.as_str() {
            "exponential" => Some(ModelKind::Malthus),
            "logistic" => Some(ModelKind::Verhulst),
            "monomolecular" => Some(ModelKind::Mitscherlich),
            "schaefer" => Some(ModelKind::RichardsSchaefer),
            "tw" => Some(ModelKind::TsoularisWallace),
            "svb" => Some(ModelKind::SpecializedVonBertalanffy),
            "gvb" => Some(ModelKind::GeneralizedVonBertalanffy),
            "smith" => Some(ModelKind::SmithApprox),
            "zipfmandelbrot" | "kinetic" => Some(ModelKind::ZipfMandelbrotKinetic),
            "marusic" => Some(ModelKind::MarusicBajzer),
            _ => None,
        };
        alias
            .or_else(|| ModelKind::ALL.into_iter().find(|k| normalize(k.name()) == key))
            .ok_or_else(|| ModelError::UnknownKind(s.to_string()))
    }
}

/// One row of the model table as printed by the command line tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub kind: ModelKind,
    pub model: &'static str,
    pub qprime: &'static str,
    pub q: &'static str,
    pub gamma: &'static str,
    pub kappa: &'static str,
    pub alpha: &'static str,
    pub free: &'static str,
    pub equation: &'static str,
    pub approximation: bool,
}

fn row(kind: ModelKind) -> TableRow {
    let (model, qprime, q, gamma, kappa, alpha, equation) = match kind {
        ModelKind::Malthus => ("Malthus (exponential)", "0", "*", "0", "r", "1", "d ln p/dt = r"),
        ModelKind::Verhulst => ("Verhulst (logistic)", "0", "1", "1", "r", "1", "d ln p/dt = r (1 − p)"),
        ModelKind::Gompertz => ("Gompertz", "0", "0", "1", "*", "1", "d ln p/dt = −κ ln p"),
        ModelKind::HyperGompertz => ("Hyper-Gompertz", "0", "0", "*", "*", "1", "d ln p/dt = κ (−ln p)^γ"),
        ModelKind::Richards => ("Richards", "0", "*", "1", "r q̃", "1", "d ln p/dt = −κ ln_q̃ p"),
        ModelKind::RichardsSchaefer => {
            ("Richards with effort (Schaefer)", "0", "*", "1", "*", "1", "d ln p/dt = −κ ln_q̃ p + ε")
        }
        ModelKind::Mitscherlich => ("Mitscherlich (monomolecular)", "1", "1", "1", "*", "0", "dp/dt = κ (1 − p)"),
        ModelKind::Blumberg => ("Blumberg", "*", "1", "*", "*", "1 − q̃′", "d ln_q̃′ p/dt = κ (1 − p)^γ"),
        ModelKind::Turner => (
            "Turner et al.",
            "q̃(γ − 1)",
            "*",
            "*",
            "*",
            "1+q̃(1−γ)",
            "d ln p/dt = κ p^{q̃(1−γ)} (−ln_q̃ p)^γ",
        ),
        ModelKind::SpecializedVonBertalanffy => {
            ("Specialized von Bertalanffy", "1/3", "1/3", "1", "*", "2/3", "d ln_{1/3} p/dt = −κ ln_{1/3} p")
        }
        ModelKind::GeneralizedVonBertalanffy => {
            ("Generalized von Bertalanffy", "q̃", "*", "1", "*", "1 − q̃", "d ln_q̃ p/dt = −κ ln_q̃ p")
        }
        ModelKind::MarusicBajzer => {
            ("Marusić and Bajzer", "*", "*", "1", "*", "1 − q̃′", "d ln_q̃′ p/dt = −κ ln_q̃ p")
        }
        ModelKind::TsoularisWallace => (
            "Tsoularis and Wallace",
            "*",
            "*",
            "*",
            "r q̃^γ",
            "1 − q̃′",
            "d ln_q̃′ p/dt = κ (−ln_q̃ p)^γ",
        ),
        ModelKind::ZipfMandelbrotKinetic => {
            ("Zipf–Mandelbrot (kinetic)", "*", "–", "0", "*", "1 − q̃′", "d ln_q̃′ p/dt = κ")
        }
        ModelKind::SmithApprox => ("Smith", "0.527", "1", "1", "*", "0.473", "d ln_0.527 p/dt ≈ −κ ln p"),
    };
    let free = match kind {
        ModelKind::Malthus => "r",
        ModelKind::Verhulst => "r",
        ModelKind::Richards => "q, r",
        ModelKind::TsoularisWallace => "qprime, q, gamma, r",
        ModelKind::Gompertz
        | ModelKind::Mitscherlich
        | ModelKind::SpecializedVonBertalanffy
        | ModelKind::SmithApprox => "kappa",
        ModelKind::HyperGompertz => "gamma, kappa",
        ModelKind::RichardsSchaefer => "q, kappa, epsilon",
        ModelKind::Blumberg => "qprime, gamma, kappa",
        ModelKind::Turner => "q, gamma, kappa",
        ModelKind::GeneralizedVonBertalanffy => "q, kappa",
        ModelKind::MarusicBajzer => "qprime, q, kappa",
        ModelKind::ZipfMandelbrotKinetic => "qprime, kappa",
    };
    TableRow {
        kind,
        model,
        qprime,
        q,
        gamma,
        kappa,
        alpha,
        free,
        equation,
        approximation: kind == ModelKind::SmithApprox,
    }
}

/// The classic rows followed, when `extended`, by the extension rows.
pub fn table_rows(extended: bool) -> Vec<TableRow> {
    ModelKind::ALL
        .into_iter()
        .filter(|k| extended || k.in_table())
        .map(row)
        .collect()
}

/// `κ = r q^γ` for the Tsoularis-Wallace row with unit capacity.
pub fn tsoularis_kappa_from_r(r: f64, q: f64, gamma: f64) -> Result<f64, ModelError> {
    let scale = q.powf(gamma);
    if !scale.is_finite() {
        return Err(ModelError::InvalidParam { name: "q", value: q, reason: "q^gamma must be real" });
    }
    Ok(r * scale)
}

struct Reader<'a> {
    kind: ModelKind,
    map: &'a ParamMap,
    used: BTreeSet<&'a str>,
}

impl<'a> Reader<'a> {
    fn optional(&mut self, name: &str) -> Option<f64> {
        let (key, value) = self.map.get_key_value(name)?;
        self.used.insert(key.as_str());
        Some(*value)
    }

    fn required(&mut self, name: &str) -> Result<f64, ModelError> {
        self.optional(name)
            .ok_or_else(|| ModelError::MissingParam { kind: self.kind, name: name.to_string() })
    }

    fn finish(self) -> Result<(), ModelError> {
        match self.map.keys().find(|k| !self.used.contains(k.as_str())) {
            Some(extra) => Err(ModelError::ExtraParam { kind: self.kind, name: extra.clone() }),
            None => Ok(()),
        }
    }
}

fn snap(q: f64) -> f64 {
    if q.abs() < BRANCH_THRESHOLD {
        0.0
    } else {
        q
    }
}

/// Bind the free slots of a row.
///
/// `p0` is optional and defaults to [`DEFAULT_P0`]. Rows whose rate is
/// conventionally written with `r` accept either `r` or `kappa`.
/// Deformations within the branch threshold of zero are snapped to zero.
pub fn model_table(kind: ModelKind, free: &ParamMap) -> Result<GrowthParams, ModelError> {
    use ModelKind::*;
    let accepted = kind.parameter_names();
    if let Some(extra) = free.keys().find(|k| !accepted.contains(&k.as_str())) {
        return Err(ModelError::ExtraParam { kind, name: extra.clone() });
    }
    let mut rd = Reader { kind, map: free, used: BTreeSet::new() };
    let p0 = rd.optional("p0").unwrap_or(DEFAULT_P0);
    let mut slot = |name: &str| rd.required(name);
    let (q_prime, q, gamma, effort) = match kind {
        Malthus => (0.0, f64::NAN, 0.0, 0.0),
        Verhulst => (0.0, 1.0, 1.0, 0.0),
        Gompertz => (0.0, 0.0, 1.0, 0.0),
        HyperGompertz => (0.0, 0.0, slot("gamma")?, 0.0),
        Richards => (0.0, slot("q")?, 1.0, 0.0),
        RichardsSchaefer => {
            let q = slot("q")?;
            (0.0, q, 1.0, slot("epsilon")?)
        }
        Mitscherlich => (1.0, 1.0, 1.0, 0.0),
        Blumberg => {
            let qp = slot("qprime")?;
            (qp, 1.0, slot("gamma")?, 0.0)
        }
        Turner => {
            let q = slot("q")?;
            let gamma = slot("gamma")?;
            (q * (gamma - 1.0), q, gamma, 0.0)
        }
        SpecializedVonBertalanffy => (1.0 / 3.0, 1.0 / 3.0, 1.0, 0.0),
        GeneralizedVonBertalanffy => {
            let q = slot("q")?;
            (q, q, 1.0, 0.0)
        }
        MarusicBajzer => {
            let qp = slot("qprime")?;
            (qp, slot("q")?, 1.0, 0.0)
        }
        TsoularisWallace => {
            let qp = slot("qprime")?;
            let q = slot("q")?;
            (qp, q, slot("gamma")?, 0.0)
        }
        ZipfMandelbrotKinetic => (slot("qprime")?, 0.0, 0.0, 0.0),
        SmithApprox => (SMITH_QPRIME, 1.0, 1.0, 0.0),
    };
    // Malthus ignores q; accept it so callers can pass a full row.
    let q = if kind == Malthus { rd.optional("q").unwrap_or(1.0) } else { q };
    let (q_prime, q) = (snap(q_prime), snap(q));

    let r = if kind.rate() == Rate::KappaOnly { None } else { rd.optional("r") };
    let kappa = match (r, rd.optional("kappa")) {
        (Some(_), Some(_)) => return Err(ModelError::ConflictingRate { kind }),
        (None, Some(k)) => k,
        (None, None) => {
            let name = if kind.rate() == Rate::KappaOnly { "kappa" } else { "r" };
            return Err(ModelError::MissingParam { kind, name: name.into() });
        }
        (Some(r), None) => match kind.rate() {
            Rate::Direct => r,
            Rate::TimesQ => {
                if q == 0.0 {
                    return Err(ModelError::InvalidParam {
                        name: "q",
                        value: q,
                        reason: "kappa = r q vanishes at q = 0; give kappa instead",
                    });
                }
                r * q
            }
            Rate::TimesQPowGamma => tsoularis_kappa_from_r(r, q, gamma)?,
            Rate::KappaOnly => unreachable!(),
        },
    };
    rd.finish()?;

    if matches!(kind, Richards | RichardsSchaefer) && q < -1.0 {
        return Err(ModelError::InvalidParam { name: "q", value: q, reason: "Richards needs q >= -1" });
    }
    if matches!(kind, HyperGompertz | Turner | Blumberg | TsoularisWallace) && gamma < 0.0 {
        return Err(ModelError::InvalidParam { name: "gamma", value: gamma, reason: "must be non-negative" });
    }
    if kind == TsoularisWallace && q == 0.0 && !is_integer(gamma) && r.is_some() {
        return Err(ModelError::InvalidParam { name: "q", value: q, reason: "q^gamma vanishes" });
    }
    GrowthParams::new(q_prime, q, gamma, kappa, effort, p0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, f64)]) -> ParamMap {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn shape(p: &GrowthParams) -> (f64, f64, f64, f64) {
        (p.q_prime(), p.q(), p.gamma(), p.kappa())
    }

    #[test]
    fn table_row_contents() {
        let v = model_table(ModelKind::Verhulst, &map(&[("r", 2.0)])).unwrap();
        assert_eq!(shape(&v), (0.0, 1.0, 1.0, 2.0));
        let s = model_table(ModelKind::SpecializedVonBertalanffy, &map(&[("kappa", 1.0)])).unwrap();
        assert_eq!(shape(&s), (1.0 / 3.0, 1.0 / 3.0, 1.0, 1.0));
        let t = model_table(ModelKind::Turner, &map(&[("q", 2.0), ("gamma", 1.5), ("kappa", 1.0)])).unwrap();
        // the row's α = 1 + q(1 − γ) is 0, so q' = 1 − α = 1
        assert_eq!(shape(&t), (1.0, 2.0, 1.5, 1.0));
        assert_eq!(1.0 - t.q_prime(), 1.0 + 2.0 * (1.0 - 1.5));
    }

    #[test]
    fn rate_aliases() {
        let r = model_table(ModelKind::Richards, &map(&[("q", 0.5), ("r", 2.0)])).unwrap();
        assert_eq!(r.kappa(), 1.0);
        let tw = model_table(
            ModelKind::TsoularisWallace,
            &map(&[("qprime", 0.1), ("q", 4.0), ("gamma", 0.5), ("r", 1.5)]),
        )
        .unwrap();
        assert_eq!(tw.kappa(), 3.0);
        assert!(matches!(
            model_table(ModelKind::Verhulst, &map(&[("r", 1.0), ("kappa", 1.0)])),
            Err(ModelError::ConflictingRate { .. })
        ));
        assert!(model_table(ModelKind::Richards, &map(&[("q", 0.0), ("r", 1.0)])).is_err());
        assert!(matches!(
            model_table(ModelKind::Gompertz, &map(&[("r", 1.0)])),
            Err(ModelError::ExtraParam { .. })
        ));
    }

    #[test]
    fn over_and_under_specification() {
        assert!(matches!(
            model_table(ModelKind::Richards, &map(&[("kappa", 1.0)])),
            Err(ModelError::MissingParam { .. })
        ));
        assert!(matches!(
            model_table(ModelKind::Verhulst, &map(&[("r", 1.0), ("gamma", 2.0)])),
            Err(ModelError::ExtraParam { .. })
        ));
        assert!(matches!(
            model_table(ModelKind::RichardsSchaefer, &map(&[("q", 1.0), ("kappa", 1.0)])),
            Err(ModelError::MissingParam { .. })
        ));
    }

    #[test]
    fn domains() {
        assert!(model_table(ModelKind::Richards, &map(&[("q", -1.5), ("kappa", 1.0)])).is_err());
        assert!(model_table(ModelKind::Richards, &map(&[("q", -1.0), ("kappa", 1.0)])).is_ok());
        let g = model_table(ModelKind::Richards, &map(&[("q", 1e-10), ("kappa", 1.0)])).unwrap();
        assert_eq!(g.q(), 0.0);
        assert!(model_table(ModelKind::Blumberg, &map(&[("qprime", 0.5), ("gamma", 0.5), ("kappa", 1.0), ("p0", 2.0)])).is_err());
    }

    #[test]
    fn kind_parsing() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
        assert_eq!("tsoularis-wallace".parse::<ModelKind>().unwrap(), ModelKind::TsoularisWallace);
        assert_eq!("logistic".parse::<ModelKind>().unwrap(), ModelKind::Verhulst);
        assert!("nope".parse::<ModelKind>().is_err());
    }

    #[test]
    fn every_row_binds_from_its_own_names() {
        for k in ModelKind::ALL {
            let mut m = ParamMap::new();
            for name in k.free_slots() {
                let v = match name {
                    "q" | "qprime" => 0.5,
                    "gamma" => 0.5,
                    "epsilon" => -0.05,
                    _ => 1.0,
                };
                m.insert(name.to_string(), v);
            }
            model_table(k, &m).unwrap_or_else(|e| panic!("{k}: {e}"));
        }
    }

    #[test]
    fn table_has_thirteen_classic_rows() {
        let rows = table_rows(false);
        assert_eq!(rows.len(), 13);
        let turner = rows.iter().find(|r| r.kind == ModelKind::Turner).unwrap();
        assert_eq!(turner.alpha, "1+q̃(1−γ)");
        assert!(rows.iter().find(|r| r.kind == ModelKind::SmithApprox).unwrap().approximation);
        assert_eq!(table_rows(true).len(), 15);
    }
}
