//! File formats, reports and parallel execution behind the `przk-bind`
//! command line. The protocol itself lives in `przk-bind-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod keyfile;
pub mod parallel;
pub mod registry_file;
pub mod report;

pub use error::CliError;
