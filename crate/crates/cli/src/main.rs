use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use resonator_cli::args::Cli;
use resonator_cli::commands::{self, EXIT_CONFIG};

fn main() -> ExitCode {
    // Diagnostics go to stderr so stdout stays parseable (selftest prints JSON).
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("RESONATOR_LOG", "error"))
        .target(env_logger::Target::Stderr)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };

    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
