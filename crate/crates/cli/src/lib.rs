//! File formats and subcommands for the `algsurg` command line.

pub mod commands;
pub mod format;
