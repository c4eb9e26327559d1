//! File formats and command implementations for the `podar` tool.
//!
//! Every command reads and validates all of its inputs before it writes any
//! output, and records a [`manifest::RunManifest`] next to its results.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod manifest;
pub mod signals;

pub use error::{CliError, Result};
