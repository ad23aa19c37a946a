use std::process::ExitCode;

use clap::Parser;
use rca::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            // keep it on one line for callers that parse stderr
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {msg}", cli.command.name());
            ExitCode::FAILURE
        }
    }
}
