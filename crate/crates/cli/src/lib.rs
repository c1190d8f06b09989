//! Command-line front end and benchmark harness for `stpaths`.

pub mod app;
pub mod bench;
pub mod error;
pub mod generate;
pub mod render;

pub use error::CliError;
