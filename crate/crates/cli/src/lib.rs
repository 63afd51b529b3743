//! Command-line front end: presentation documents, subcommands, and JSON
//! reports.

pub mod commands;
pub mod presentation;
pub mod report;

pub use commands::{exit_code, run, run_args, run_command, Cli, Command};
pub use presentation::{
    emit_presentation, load_presentation, parse_presentation, Document, Presentation,
};
pub use report::{emit_growth_csv, Report, Warning};
