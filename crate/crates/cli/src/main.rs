//! `opo-epr`: plot data and entanglement reports for the OPO model.

mod args;
mod commands;
mod output;
mod params;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use output::{emit, json_text};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] opo_epr::Error),
    #[error("{0}")]
    Record(String),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(_) | CliError::Record(_) | CliError::Output(_) => 3,
        }
    }
}

fn report_only(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage(format!("{command} writes a JSON report; csv is not available"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            model,
            coupling,
            mode,
            phi_start,
            phi_stop,
            phi_points,
            output,
        } => {
            let p = params::resolve(&model, Some(&coupling))?;
            let grid = commands::linspace(phi_start, phi_stop, phi_points)?;
            let table = commands::spectrum(&p, mode, &grid)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv()?,
                Format::Json => json_text(&table.to_json()),
            };
            emit(&text, output.out.as_deref())
        }
        Command::ScanCoupling {
            model,
            c_start,
            c_stop,
            c_points,
            c_values,
            output,
        } => {
            let p = params::resolve(&model, None)?;
            let grid = match c_values {
                Some(v) if v.is_empty() => return Err(CliError::Usage("--c-values is empty".into())),
                Some(v) => v,
                None => commands::linspace(c_start, c_stop, c_points)?,
            };
            let table = commands::scan_coupling(&p, &grid)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv()?,
                Format::Json => json_text(&table.to_json()),
            };
            emit(&text, output.out.as_deref())
        }
        Command::Covariance {
            model,
            coupling,
            basis,
            standardized,
            output,
        } => {
            report_only(output.format, "covariance")?;
            let p = params::resolve(&model, Some(&coupling))?;
            emit(&json_text(&commands::covariance(&p, basis, standardized)?), output.out.as_deref())
        }
        Command::Analyze {
            record,
            budget,
            chain,
            model,
            output,
        } => {
            report_only(output.format, "analyze")?;
            let v = match record {
                Some(path) if !budget => commands::analyze_record(&path)?,
                _ => commands::budget(&params::resolve(&model, None)?, &chain)?,
            };
            emit(&json_text(&v), output.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // help and version exit 0, usage errors 2
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("opo-epr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
