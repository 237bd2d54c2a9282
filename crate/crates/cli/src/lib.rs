//! Library side of the `witnesskit` command-line tool: state files,
//! canonical JSON and the subcommands.

pub mod commands;
pub mod error;
pub mod statefile;

pub use commands::{analyze, bell, catalog, parse_criteria, witness, Method, Report, RunOptions};
pub use error::{CliError, CliResult};
pub use statefile::{read_input, StateFile};
