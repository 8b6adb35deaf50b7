//! Library half of the `centra` command-line tool: subcommands and their reports.

pub mod commands;
pub mod report;
pub mod text;
