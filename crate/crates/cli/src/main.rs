use std::process::ExitCode;

use clap::Parser;

use omegaforge_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("omegaforge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
