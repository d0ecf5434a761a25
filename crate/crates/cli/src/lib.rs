//! Library side of the `magfib` command-line tool.

pub mod args;
pub mod commands;
pub mod input;
pub mod report;

pub use commands::{run, Outcome};
