//! Command-line front end for `kapitza-core`: traces, classification,
//! boundary curves, diagrams (CSV and SVG), self-checks and trajectories.

pub mod config;
pub mod error;
pub mod format;
pub mod run;
pub mod svg;
pub mod verify;

pub use error::{CliError, CliResult};
