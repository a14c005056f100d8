//! Command-line front end: argument parsing, run configuration, the
//! prevalence experiment and the report writers.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;

use std::io::Write;

pub use args::Cli;
pub use config::RunConfig;
pub use error::{CliError, CliResult, EXIT_DOMAIN, EXIT_INPUT, EXIT_OK};

/// Runs one command and returns its exit code. Errors are reported on stderr.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> u8 {
    use args::Command::*;
    let result = match &cli.command {
        Gen(a) => commands::cmd_gen(a, out),
        Analyze(a) => commands::cmd_analyze(a, out),
        Transport(a) => commands::cmd_transport(a, out),
        Simulate(a) => commands::cmd_simulate(a, out),
        Verify(a) => commands::cmd_verify(a, out),
        Oracle(a) => commands::cmd_oracle(&a.which, out),
        Experiment(a) => commands::cmd_experiment(&a.which, out),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    code
}
