use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use qgrowth::dynamics::solve_params;
use qgrowth::fitkit::{fit_with, FitOptions, LossSpace, ObservationSeries, N_INF};
use qgrowth::models::{ModelKind, ParamMap};
use serde_json::json;

use crate::args::{ModelArgs, OutputArgs, ToleranceArgs};
use crate::output;

#[derive(Args, Debug)]
pub struct FitArgs {
    /// CSV with a `t` column and a `p` (or raw `n`) column.
    #[arg(long)]
    input: PathBuf,
    /// Initial values and fixed parameters, as NAME=VALUE.
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated parameters to estimate; defaults to every parameter
    /// with an initial value.
    #[arg(long, value_delimiter = ',')]
    free: Option<Vec<String>>,
    /// Box constraint NAME=LO:HI on a free parameter (repeatable).
    #[arg(long = "bound", value_name = "NAME=LO:HI")]
    bounds: Vec<String>,
    /// Known carrying capacity for raw counts.
    #[arg(long)]
    n_inf: Option<f64>,
    #[arg(long, default_value = "log")]
    loss: LossSpace,
    /// Where to write the fitted trajectory; defaults to the report path
    /// with a `.fitted.csv` suffix.
    #[arg(long)]
    fitted: Option<PathBuf>,
    #[command(flatten)]
    tol: ToleranceArgs,
    #[command(flatten)]
    out: OutputArgs,
}

/// Reads `t` and `p` (or `n`) columns, skipping `#` lines and rows whose
/// `flag` column, when present, is not `ok`.
fn read_series(path: &Path, n_inf: Option<f64>) -> Result<(ObservationSeries, bool)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let t_col = col("t").ok_or_else(|| anyhow!("input is missing column 't'"))?;
    let (v_col, raw) = match (col("p"), col("n")) {
        (Some(i), _) => (i, false),
        (None, Some(i)) => (i, true),
        (None, None) => bail!("input is missing column 'p' (or 'n' for raw counts)"),
    };
    let flag_col = col("flag");

    let (mut times, mut values) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if flag_col.is_some_and(|c| rec.get(c) != Some("ok")) {
            continue;
        }
        let field = |c: usize, name: &str| -> Result<f64> {
            let s = rec.get(c).ok_or_else(|| anyhow!("row {}: column '{name}' is empty", i + 1))?;
            s.parse().with_context(|| format!("row {}: column '{name}' is not a number", i + 1))
        };
        times.push(field(t_col, "t")?);
        values.push(field(v_col, if raw { "n" } else { "p" })?);
    }
    let series = if raw {
        ObservationSeries::raw(times, values, n_inf)?
    } else {
        if n_inf.is_some() {
            bail!("--n-inf only applies to raw counts (column 'n')");
        }
        ObservationSeries::normalized(times, values)?
    };
    Ok((series, raw))
}

fn default_init(kind: ModelKind, first: f64) -> ParamMap {
    let mut init = ParamMap::new();
    for name in kind.free_slots() {
        let v = match name {
            "qprime" => 0.5,
            "gamma" => 1.0,
            "epsilon" => 0.0,
            _ => 1.0,
        };
        init.insert(name.to_string(), v);
    }
    init.insert("p0".into(), first.clamp(1e-9, 0.99));
    init
}

fn parse_bound(s: &str) -> Result<(String, (f64, f64))> {
    let (name, range) = s.split_once('=').ok_or_else(|| anyhow!("expected NAME=LO:HI, got '{s}'"))?;
    let (lo, hi) = range.split_once(':').ok_or_else(|| anyhow!("expected NAME=LO:HI, got '{s}'"))?;
    let parse = |v: &str| -> Result<f64> {
        let v = v.trim();
        if v.is_empty() {
            return Ok(f64::NAN);
        }
        v.parse().with_context(|| format!("bound '{s}' is not numeric"))
    };
    let lo = parse(lo)?;
    let hi = parse(hi)?;
    let lo = if lo.is_nan() { f64::NEG_INFINITY } else { lo };
    let hi = if hi.is_nan() { f64::INFINITY } else { hi };
    Ok((name.trim().to_string(), (lo, hi)))
}

pub fn run(args: FitArgs) -> Result<ExitCode> {
    let kind = args.model.kind()?;
    let (series, raw) = read_series(&args.input, args.n_inf)?;
    let user = args.model.param_map()?;
    if raw && args.n_inf.is_none() && !user.contains_key(N_INF) {
        bail!("raw counts need --n-inf or an initial guess --param n_inf=VALUE");
    }

    let first = series.normalized_values(user.get(N_INF).copied())?[0];
    let mut init = default_init(kind, first);
    if user.contains_key("r") {
        init.remove("kappa");
    }
    init.extend(user);
    let free = match args.free {
        Some(f) => f,
        None => init.keys().cloned().collect(),
    };
    for name in &free {
        if name != N_INF && !kind.parameter_names().contains(&name.as_str()) {
            bail!("'{name}' is not a parameter of the {kind} row (accepted: {})", kind.parameter_names().join(", "));
        }
    }

    let mut opts = FitOptions::new(&[], init);
    opts.free = free;
    opts.loss = args.loss;
    opts.integrator = args.tol.config()?;
    for b in &args.bounds {
        let (name, range) = parse_bound(b)?;
        opts.bounds.insert(name, range);
    }
    let result = fit_with(&series, kind, &opts)?;

    let capacity = result.free_values.get(N_INF).copied().or(args.n_inf).or(opts.init.get(N_INF).copied());
    let data = json!({
        "free_values": result.free_values,
        "sse": result.sse,
        "n_evals": result.n_evals,
        "converged": result.converged,
        "loss_space": result.loss_space,
        "method": result.method,
        "n_inf": capacity,
        "n_obs": series.len(),
    });
    let report = output::envelope(kind.name(), serde_json::to_value(result.params)?, data);
    let mut w = output::sink(args.out.output.as_deref())?;
    output::write_json(&mut *w, &report)?;
    w.flush()?;

    let fitted_path = args.fitted.clone().or_else(|| args.out.output.as_ref().map(|p| p.with_extension("fitted.csv")));
    if let Some(path) = fitted_path {
        let (traj, method) = solve_params(kind, &result.params, series.times(), &opts.integrator)?;
        let comment = output::header_comment("fit", kind, &result.params, &[("sse", output::num(result.sse))]);
        let comment = (!args.out.no_header_comment).then_some(comment.as_str());
        let mut w = output::sink(Some(&path))?;
        output::write_trajectory_csv(&mut *w, &traj, method, comment)?;
        w.flush()?;
    }

    if result.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("warning: fit did not converge after {} evaluations; best point reported", result.n_evals);
        Ok(ExitCode::from(3))
    }
}
