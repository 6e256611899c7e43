//! `shiftarc`: reproducible experiments on rotation-coded arcs.
//!
//! Exit codes: 0 success or property holds, 1 property fails with a witness,
//! 2 invalid input, 3 admissibility breach on an arc, 4 non-convergence.

mod args;
mod commands;
mod config;
mod error;

use clap::Parser;
use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config::merge(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("shiftarc: {e}");
            std::process::exit(e.exit_code());
        }
    };
    // clap exits with 2 on usage errors and 0 for --help.
    let cli = args::Cli::parse_from(argv);
    match commands::run(&cli) {
        Ok(done) => {
            print!("{}", done.stdout);
            std::io::stdout().flush().ok();
            std::process::exit(done.code);
        }
        Err(e) => {
            eprintln!("shiftarc: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
