use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use kinelink_cli::{exit_code, run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.command.is_none() && !cli.version {
        let _ = Cli::command().print_help();
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli) {
        Ok(summary) => {
            let _ = std::io::stdout().write_all(summary.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("kinelink: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
