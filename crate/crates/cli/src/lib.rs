//! Library side of the `tq` command: model-file parsing, name resolution
//! and the subcommand reports. The binary in `main.rs` only handles
//! arguments, I/O and exit codes.

pub mod build;
pub mod commands;
pub mod config;
pub mod diag;
pub mod expr;

pub use commands::{run, Command, Options, Origin, Outcome};
pub use diag::Diagnostic;
