//! File formats and the `floergrowth` command-line front end.

pub mod cli;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use error::CliError;
