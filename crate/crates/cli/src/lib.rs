//! File formats, reports, the threaded path runner and the acceptance suite
//! behind the `stable-ergo` binary.

pub mod acceptance;
pub mod cli;
pub mod commands;
pub mod error;
pub mod profile;
pub mod report;
pub mod runner;

pub use error::{CliError, ExitCode};

/// Version tag carried by every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;
