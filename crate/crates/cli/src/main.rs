use std::process::ExitCode;

use clap::Parser;
use lorenz_cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
