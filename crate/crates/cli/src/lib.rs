//! Model files and command dispatch for the `poisson-avg` binary.

pub mod cli;
pub mod commands;
pub mod spec;

pub use cli::{run, Cli, Format};
pub use commands::{run_command, Command, Options, RunReport, UsageError};
pub use spec::{canonical_json, parse_spec, parse_spec_str, Diagnostic, ModelSpec, SpecError};
