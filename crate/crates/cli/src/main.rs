//! `nlslab` — CLI over the radial NLS laboratory.
//!
//! Exit codes: 0 success; 2 validation failure; 3 numerical failure
//! (lost shooting bracket, underresolved evolution, ...); 64 usage error.

mod args;
mod commands;
mod files;
mod json;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    std::process::exit(64);
                }
            }
        }
    };
    let result = match cli.command {
        Command::Groundstate(a) => commands::groundstate(a),
        Command::Kato(a) => commands::kato(a),
        Command::Classify(a) => commands::classify(a),
        Command::Evolve(a) => commands::evolve_cmd(a),
        Command::Virial(a) => commands::virial(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
