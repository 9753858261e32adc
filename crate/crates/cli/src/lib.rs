//! Subcommands, JSON envelopes and the acceptance suite behind the `parind` binary.

pub mod commands;
pub mod envelope;
pub mod selftest;

pub use envelope::{Backend, CliError, ErrorEnvelope, OutputFormat, ReportEnvelope, RunConfig, Summary};
