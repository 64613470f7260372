use std::process::ExitCode;

use clap::Parser;

use finsat_cli::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    print!("{}", outcome.report);
    ExitCode::from(outcome.code as u8)
}
