//! File formats, SVG rendering and command dispatch for the `vtoric` tool.

pub mod commands;
pub mod format;
pub mod svg;

pub use commands::{exit_code, run, Cli, CliError};
