//! Batch front-end for the identity suites of `racah-core`: a thread-pool
//! runner with wall-clock timing, run configuration, and text / JSON-lines
//! report streams.

pub mod cli;
pub mod config;
pub mod output;
pub mod runner;
pub mod suite;

use std::io;

pub use config::{ConfigError, OutputFormat, RunConfig, Suite};
pub use runner::Parallel;
pub use suite::{run, Summary};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] racah_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Process exit status for a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Passed = 0,
    IdentityFailure = 1,
    Usage = 2,
}
