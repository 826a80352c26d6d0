use std::process::ExitCode;

use clap::Parser;

use segalign::cli::{error_report, render, run, Cli};
use segalign::CliError;

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        emit(&cli, &render(&outcome.report)?)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let text = render(&error_report(&e)).unwrap_or_else(|_| format!("{e}\n"));
            eprint!("{text}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
