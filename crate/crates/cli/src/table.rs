use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use qgrowth::models::{table_rows, TableRow};

use crate::args::{Format, OutputArgs};
use crate::output;

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include the extension rows (effort rate, kinetic law).
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    out: OutputArgs,
}

const COLUMNS: [&str; 10] = ["kind", "model", "qprime", "q", "gamma", "kappa", "alpha", "free", "equation", "approximation"];

fn fields(r: &TableRow) -> [String; 10] {
    [
        r.kind.name().to_string(),
        r.model.to_string(),
        r.qprime.to_string(),
        r.q.to_string(),
        r.gamma.to_string(),
        r.kappa.to_string(),
        r.alpha.to_string(),
        r.free.to_string(),
        r.equation.to_string(),
        r.approximation.to_string(),
    ]
}

fn render_text(rows: &[TableRow]) -> String {
    let cells: Vec<[String; 10]> = rows.iter().map(fields).collect();
    let width = |i: usize| {
        cells.iter().map(|c| c[i].chars().count()).chain([COLUMNS[i].len()]).max().unwrap_or(0)
    };
    let widths: Vec<usize> = (0..COLUMNS.len()).map(width).collect();
    let line = |cols: &[String]| {
        let padded: Vec<String> = cols
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(&COLUMNS.map(String::from)) + "\n";
    for c in &cells {
        out += &line(c);
        out.push('\n');
    }
    out
}

pub fn run(args: TableArgs) -> Result<ExitCode> {
    let rows = table_rows(args.all);
    let mut w = output::sink(args.out.output.as_deref())?;
    match args.format {
        Format::Text => w.write_all(render_text(&rows).as_bytes())?,
        Format::Csv => {
            let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut w);
            csv.write_record(COLUMNS)?;
            for r in &rows {
                csv.write_record(fields(r))?;
            }
            csv.flush()?;
        }
        Format::Json => output::write_json(&mut *w, &serde_json::to_value(&rows)?)?,
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
