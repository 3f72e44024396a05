mod args;
mod commands;
mod error;
mod output;
mod selection;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Energies(a) => commands::energies(a),
        Command::Expect(a) => commands::expect(a),
        Command::Validate(a) => commands::validate(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::VerifyRule(a) => commands::verify_rule(a),
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
