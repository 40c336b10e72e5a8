use std::process::ExitCode;

use std::io::Write;

use anyhow::{bail, Result};
use clap::Args;
use qgrowth::dynamics::{integrate, propagate_beta, solve_params, IntegratorConfig, Trajectory};
use qgrowth::models::{model_table, ModelKind, ParamMap};
use serde_json::json;

use crate::args::{Format, ModelArgs, OutputArgs, ToleranceArgs};
use crate::output;

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Restrict the check to one model row.
    #[command(flatten)]
    model: ModelArgs,
    /// Largest acceptable deviation.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    integrator: ToleranceArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq)]
enum Reference {
    Analytic,
    Beta,
}

impl Reference {
    fn name(self) -> &'static str {
        match self {
            Reference::Analytic => "analytic",
            Reference::Beta => "beta",
        }
    }
}

fn cases() -> Vec<(ModelKind, Reference, ParamMap)> {
    use ModelKind::*;
    use Reference::*;
    let m = |pairs: &[(&str, f64)]| pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect::<ParamMap>();
    vec![
        (Malthus, Analytic, m(&[("kappa", 1.0)])),
        (Verhulst, Analytic, m(&[("kappa", 1.0)])),
        (Gompertz, Analytic, m(&[("kappa", 1.0)])),
        (HyperGompertz, Analytic, m(&[("gamma", 1.5), ("kappa", 1.0)])),
        (Richards, Analytic, m(&[("q", 2.0), ("kappa", 1.0)])),
        (RichardsSchaefer, Analytic, m(&[("q", 2.0), ("kappa", 1.0), ("epsilon", -0.1)])),
        (Mitscherlich, Analytic, m(&[("kappa", 1.0)])),
        (Turner, Analytic, m(&[("q", 2.0), ("gamma", 1.5), ("kappa", 1.0)])),
        (SpecializedVonBertalanffy, Analytic, m(&[("kappa", 1.0)])),
        (GeneralizedVonBertalanffy, Analytic, m(&[("q", 2.0), ("kappa", 1.0)])),
        (ZipfMandelbrotKinetic, Analytic, m(&[("qprime", 0.5), ("kappa", 1.0)])),
        (Blumberg, Beta, m(&[("qprime", 0.9), ("gamma", 0.5), ("kappa", 1.0)])),
        (TsoularisWallace, Beta, m(&[("qprime", 0.9), ("q", 1.0), ("gamma", 0.5), ("kappa", 1.0)])),
        (TsoularisWallace, Beta, m(&[("qprime", -0.5), ("q", -1.0), ("gamma", 0.75), ("kappa", 1.0), ("p0", 0.01)])),
    ]
}

fn max_delta(a: &Trajectory, b: &Trajectory) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn compare(kind: ModelKind, reference: Reference, free: &ParamMap, grid: &[f64], cfg: &IntegratorConfig) -> Result<f64> {
    let params = model_table(kind, free)?;
    let ode = integrate(&params, grid, cfg)?;
    let exact = match reference {
        Reference::Analytic => solve_params(kind, &params, grid, cfg)?.0,
        Reference::Beta => propagate_beta(&params, grid)?,
    };
    Ok(max_delta(&exact, &ode))
}

pub fn run(args: CheckArgs) -> Result<ExitCode> {
    let only = args.model.resolve_kind()?;
    let cfg = args.integrator.config()?;
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();

    let selected: Vec<_> = cases().into_iter().filter(|(k, _, _)| only.is_none_or(|o| o == *k)).collect();
    if selected.is_empty() {
        bail!("no reference solution to check {} against", only.map_or("", |k| k.name()));
    }

    let mut rows = Vec::new();
    let mut all_ok = true;
    for (kind, reference, free) in &selected {
        let (delta, status) = match compare(*kind, *reference, free, &grid, &cfg) {
            Ok(d) if d <= args.tol => (d, "pass".to_string()),
            Ok(d) => (d, "fail".to_string()),
            Err(e) => (f64::NAN, format!("error: {e}")),
        };
        all_ok &= status == "pass";
        rows.push((kind.name(), reference.name(), delta, status));
    }

    let mut w = output::sink(args.out.output.as_deref())?;
    match args.format {
        Format::Json => {
            let data: Vec<_> = rows
                .iter()
                .map(|(m, r, d, s)| json!({ "model": m, "reference": r, "max_abs_delta": d, "status": s }))
                .collect();
            let params = json!({ "tol": args.tol, "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol });
            let model = only.map_or("all", |k| k.name());
            output::write_json(&mut *w, &output::envelope(model, params, json!(data)))?;
        }
        Format::Csv | Format::Text => {
            if !args.out.no_header_comment {
                writeln!(w, "# qgrowth check tol={:?} rel_tol={:?} abs_tol={:?}", args.tol, cfg.rel_tol, cfg.abs_tol)?;
            }
            writeln!(w, "model,reference,max_abs_delta,tolerance,status")?;
            for (m, r, d, s) in &rows {
                writeln!(w, "{m},{r},{},{},{}", output::num(*d), output::num(args.tol), s.replace(',', ";"))?;
            }
        }
    }
    w.flush()?;
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
