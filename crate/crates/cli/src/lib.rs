//! Library side of the `idmps` command: file formats and subcommands, kept
//! separate from argument parsing so they can be tested directly.

pub mod commands;
pub mod error;
pub mod files;

pub use error::CliError;
