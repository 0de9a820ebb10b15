//! Std companion to `walsh-prime`: the binary `Λ` cache, run configuration,
//! CSV/JSON report rendering, and the self-verification suites behind the
//! `walsh-prime` command.

pub mod cache;
pub mod commands;
pub mod config;
mod error;
pub mod report;
pub mod verify;

pub use error::{CliError, ExitStatus};
