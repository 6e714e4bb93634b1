//! Command-line front end. `main.rs` only parses and maps errors to exit
//! codes; everything else lives here so tests can drive it in-process.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod render;

use args::{Cli, Command};
pub use error::{exit, CliError};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Select(a) => commands::select(a),
        Command::Compare(a) => commands::compare_cmd(a),
        Command::Oracle(a) => commands::oracle_cmd(a),
        Command::Flops(a) => commands::flops_cmd(a),
        Command::Bench(a) => commands::bench_cmd(a),
        Command::Render(a) => commands::render_cmd(a),
    }
}
