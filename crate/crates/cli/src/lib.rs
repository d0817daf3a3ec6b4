//! Configuration, subcommands and file output for the `unruh` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

pub use commands::{execute, CliError, Command, Invocation, Report, Source};
pub use config::{ConfigError, RunConfig};
