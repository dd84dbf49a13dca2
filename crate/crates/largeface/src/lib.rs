//! Driver for `largeface-core`: parallel replicate runners, run
//! configurations, CSV/JSON output and the `largeface` command line.
//!
//! Every experiment is a [`config::RunConfig`]; [`cli::execute`] runs one and
//! writes its outputs plus a manifest that replays it exactly.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod output;
pub mod runner;

pub use error::{RunError, RunResult};
pub use runner::Runner;
