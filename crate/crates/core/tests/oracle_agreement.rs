//! Adaptive integration against every closed form, and recovery of
//! parameters from noise-free synthetic data.

use qgrowth::dynamics::{integrate, solve, IntegratorConfig, Method};
use qgrowth::fitkit::{fit, LossSpace, ObservationSeries};
use qgrowth::models::{closed_form, model_table, ModelKind, ParamMap, PointStatus};

fn map(pairs: &[(&str, f64)]) -> ParamMap {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

// κ = 1, q = 2, γ = 1.5 wherever the row leaves them free; p0 = 0.001.
fn figure_rows() -> Vec<(ModelKind, ParamMap)> {
    use ModelKind::*;
    vec![
        (Malthus, map(&[("kappa", 1.0)])),
        (Verhulst, map(&[("kappa", 1.0)])),
        (Gompertz, map(&[("kappa", 1.0)])),
        (HyperGompertz, map(&[("gamma", 1.5), ("kappa", 1.0)])),
        (Richards, map(&[("q", 2.0), ("kappa", 1.0)])),
        (Mitscherlich, map(&[("kappa", 1.0)])),
        (SpecializedVonBertalanffy, map(&[("kappa", 1.0)])),
        (GeneralizedVonBertalanffy, map(&[("q", 2.0), ("kappa", 1.0)])),
        (Turner, map(&[("q", 2.0), ("gamma", 1.5), ("kappa", 1.0)])),
        (RichardsSchaefer, map(&[("q", 2.0), ("kappa", 1.0), ("epsilon", -0.1)])),
        (ZipfMandelbrotKinetic, map(&[("qprime", 0.5), ("kappa", 1.0)])),
    ]
}

fn grid() -> Vec<f64> {
    (0..=200).map(|i| i as f64 * 0.05).collect()
}

#[test]
fn integrate_matches_closed_forms() {
    for (kind, free) in figure_rows() {
        let params = model_table(kind, &free).unwrap();
        let traj = integrate(&params, &grid(), &IntegratorConfig::default()).unwrap();
        let mut worst: f64 = 0.0;
        for (t, v, flag) in traj.iter() {
            assert_eq!(flag, PointStatus::Ok);
            let exact = closed_form(kind, &params, t).unwrap().unwrap().value;
            worst = worst.max((v - exact).abs());
        }
        assert!(worst <= 1e-6, "{kind}: max deviation {worst:e}");
    }
}

#[test]
fn solve_uses_closed_forms_for_these_rows() {
    for (kind, free) in figure_rows() {
        let (_, method) = solve(kind, &free, &[0.0, 1.0], &IntegratorConfig::default()).unwrap();
        assert_eq!(method, Method::Analytic, "{kind}");
    }
}

#[test]
fn closed_form_rows_are_recovered() {
    let times: Vec<f64> = (0..50).map(|i| 10.0 * i as f64 / 49.0).collect();
    let cases: Vec<(ModelKind, ParamMap)> = vec![
        (ModelKind::Verhulst, map(&[("kappa", 1.0), ("p0", 0.01)])),
        (ModelKind::Gompertz, map(&[("kappa", 0.6), ("p0", 0.01)])),
        (ModelKind::HyperGompertz, map(&[("gamma", 1.5), ("kappa", 0.5), ("p0", 0.01)])),
        (ModelKind::Richards, map(&[("q", 0.5), ("kappa", 0.8), ("p0", 0.01)])),
        (ModelKind::Mitscherlich, map(&[("kappa", 0.4), ("p0", 0.01)])),
        (ModelKind::SpecializedVonBertalanffy, map(&[("kappa", 0.7), ("p0", 0.01)])),
        (ModelKind::GeneralizedVonBertalanffy, map(&[("q", 0.6), ("kappa", 0.7), ("p0", 0.01)])),
        (ModelKind::Turner, map(&[("q", 2.0), ("gamma", 1.5), ("kappa", 1.0), ("p0", 0.01)])),
        (ModelKind::Malthus, map(&[("kappa", 0.3), ("p0", 0.01)])),
    ];
    for (kind, truth) in cases {
        let params = model_table(kind, &truth).unwrap();
        let values = times.iter().map(|&t| closed_form(kind, &params, t).unwrap().unwrap().value).collect();
        let series = ObservationSeries::normalized(times.clone(), values).unwrap();
        let init: ParamMap = truth.iter().map(|(k, v)| (k.clone(), v * 1.5)).collect();
        let free: Vec<&str> = truth.keys().map(String::as_str).collect();
        for loss in [LossSpace::Log, LossSpace::Linear] {
            let r = fit(&series, kind, &free, &init, loss).unwrap();
            for (name, want) in &truth {
                let got = r.free_values[name];
                assert!((got / want - 1.0).abs() <= 1e-3, "{kind} {loss}: {name} = {got}, truth {want}");
            }
        }
    }
}
