//! `qgrowth`: simulate, fit, tabulate and self-check growth models built on
//! deformed logarithms.

mod args;
mod check;
mod fit;
mod output;
mod simulate;
mod table;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "qgrowth", version, about = "Growth models of the deformed-logarithm family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a trajectory for one model.
    Simulate(simulate::SimulateArgs),
    /// Estimate parameters from a CSV series.
    Fit(fit::FitArgs),
    /// Print the table of named models.
    Table(table::TableArgs),
    /// Compare closed forms and the implicit solution with numerical integration.
    Check(check::CheckArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Fit(a) => fit::run(a),
        Command::Table(a) => table::run(a),
        Command::Check(a) => check::run(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
