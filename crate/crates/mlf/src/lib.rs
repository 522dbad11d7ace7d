//! Command-line front end for `mlf-core`: flag parsing, the JSON/CSV record
//! format, thread-pooled grid checks and the two region figures.

pub mod args;
pub mod commands;
pub mod figure;
pub mod record;

pub use commands::{run, CliError};
