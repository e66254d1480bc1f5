//! Command-line experiment runner for the structural eigenfrequency and
//! heat-surrogate toolkit.
//!
//! Every command reads an optional JSON config file, applies flag
//! overrides, validates strictly (unknown keys are errors), and writes its
//! reports plus the fully resolved config into one output directory, so a
//! finished run documents itself. All reported floats carry 9 significant
//! digits and every command is deterministic for a fixed seed and config.
//!
//! Exit codes: 0 success, 2 configuration or input errors, 3 runtime or
//! numerical failures.
//!
//! The report builders in [`documents`] are shared with the HTTP job
//! service, which keeps the two transports value-identical by construction.

pub mod cli;
pub mod commands;
pub mod config;
pub mod documents;
pub mod error;
pub mod matrixfile;

pub use cli::{run, Cli, Command};
pub use error::{CliError, Result};
