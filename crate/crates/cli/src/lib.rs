//! Command-line runner for `epictrl-core`: instance generation, the solvers,
//! path censuses and comparisons, with JSON and CSV output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

pub use args::Cli;
pub use commands::{run, SCHEMA};
pub use error::CliError;
