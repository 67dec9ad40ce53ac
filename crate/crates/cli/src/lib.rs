//! Configuration, dispatch and output for the `gempl` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run_command, Outputs, ResultEnvelope};
pub use config::{parse_config, parse_config_with, Command, RunConfig};
pub use error::CliError;
pub use output::write_outputs;
