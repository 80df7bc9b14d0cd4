//! JSON configs, exports and the `qpack` subcommands.

mod commands;
pub mod config;
pub mod export;
pub mod verify;

pub use commands::{run, Command, Report, RunOptions};
pub use config::{load_config, RunConfig};
pub use export::ExportFormat;
