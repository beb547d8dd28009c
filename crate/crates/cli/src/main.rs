use std::process::ExitCode;

use clap::Parser;
use interdisc_cli::cli::{execute, Cli};

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("interdisc: error: {e}");
            ExitCode::FAILURE
        }
    }
}
