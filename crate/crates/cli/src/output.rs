//! Rendering of trajectories and JSON envelopes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use qgrowth::dynamics::{Method, Trajectory};
use qgrowth::models::{GrowthParams, ModelKind};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `# qgrowth <command> model=... qprime=... ...`
pub fn header_comment(command: &str, kind: ModelKind, params: &GrowthParams, extra: &[(&str, String)]) -> String {
    let mut line = format!(
        "# qgrowth {command} model={kind} qprime={:?} q={:?} gamma={:?} kappa={:?} epsilon={:?} p0={:?}",
        params.q_prime(),
        params.q(),
        params.gamma(),
        params.kappa(),
        params.effort(),
        params.p0()
    );
    for (k, v) in extra {
        line.push_str(&format!(" {k}={v}"));
    }
    line
}

pub fn write_trajectory_csv(w: &mut dyn Write, traj: &Trajectory, method: Method, comment: Option<&str>) -> Result<()> {
    if let Some(c) = comment {
        writeln!(w, "{c}")?;
    }
    writeln!(w, "t,p,method,flag")?;
    for (t, p, flag) in traj.iter() {
        writeln!(w, "{},{},{},{}", num(t), num(p), method, flag.as_str())?;
    }
    Ok(())
}

pub fn trajectory_rows(traj: &Trajectory) -> Value {
    Value::Array(
        traj.iter()
            .map(|(t, p, flag)| json!({ "t": t, "p": p, "flag": flag.as_str() }))
            .collect(),
    )
}

pub fn envelope(model: &str, params: Value, data: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "model": model,
        "params": params,
        "data": data,
    })
}

pub fn write_json(w: &mut dyn Write, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}
