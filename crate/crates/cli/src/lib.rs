//! Scenario files, CSV/SVG artifacts and the `cournot` subcommands.

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;
pub mod svg;

pub use error::{CliError, Result};
