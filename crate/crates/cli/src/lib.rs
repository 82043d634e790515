//! Command-line front end: `solve`, `identify` and `reproduce`.

pub mod cli;
pub mod commands;
pub mod csvio;
pub mod error;

pub use cli::Cli;
pub use commands::{run, Command};
pub use error::CliError;
