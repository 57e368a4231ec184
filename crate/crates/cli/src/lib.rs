//! Command line front end for `frate-core`: JSON file formats, CSV and JSON
//! reports, the scan plot and the `frate` subcommands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod report;

pub use commands::run;
pub use error::{CliError, CliResult};
