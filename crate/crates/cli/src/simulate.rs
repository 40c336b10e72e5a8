use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use qgrowth::dynamics::solve_params;
use qgrowth::models::model_table;
use serde_json::json;

use crate::args::{Format, GridArgs, ModelArgs, OutputArgs, ToleranceArgs};
use crate::output;

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    tol: ToleranceArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

pub fn run(args: SimulateArgs) -> Result<ExitCode> {
    let kind = args.model.kind()?;
    let params = model_table(kind, &args.model.param_map()?)?;
    let grid = args.grid.grid()?;
    let cfg = args.tol.config()?;
    let (traj, method) = solve_params(kind, &params, &grid, &cfg)?;

    let mut w = output::sink(args.out.output.as_deref())?;
    match args.format {
        Format::Csv | Format::Text => {
            let comment = output::header_comment(
                "simulate",
                kind,
                &params,
                &[("rel_tol", format!("{:?}", cfg.rel_tol)), ("abs_tol", format!("{:?}", cfg.abs_tol))],
            );
            let comment = (!args.out.no_header_comment).then_some(comment.as_str());
            output::write_trajectory_csv(&mut *w, &traj, method, comment)?;
        }
        Format::Json => {
            let data = json!({ "method": method, "trajectory": output::trajectory_rows(&traj) });
            output::write_json(&mut *w, &output::envelope(kind.name(), serde_json::to_value(params)?, data))?;
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
