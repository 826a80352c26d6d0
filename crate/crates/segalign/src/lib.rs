//! Command-line tooling for segment-based sequence alignment: input and
//! output formats, run configuration, and the `segalign` commands.

pub mod cli;
pub mod config;
pub mod error;
pub mod formats;

pub use error::{CliError, Result};
