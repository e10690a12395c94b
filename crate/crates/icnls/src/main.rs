use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use icnls::commands::execute;
use icnls::config::{Cli, RunConfig};
use icnls::error::{CliError, ExitStatus};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let message = text.trim().trim_start_matches("error: ");
            let err = CliError::Config(message.to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(ExitStatus::Config as u8);
        }
    };
    match RunConfig::resolve(cli.command, cli.options).and_then(|cfg| execute(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.status() as u8)
        }
    }
}
