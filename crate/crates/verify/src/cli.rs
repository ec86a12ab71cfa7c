use std::path::PathBuf;

use clap::Parser;

use crate::config::{expand, ConfigError, OutputFormat, RunConfig, Suite};

/// Verify the oscillator realization of the generalized Racah algebra and
/// its reductions by exact symbolic expansion.
#[derive(Debug, Parser)]
#[command(name = "racah-verify", version)]
pub struct Cli {
    /// Suites to run (comma separated or repeated).
    #[arg(long = "suite", value_enum, value_delimiter = ',', default_value = "all")]
    pub suites: Vec<Suite>,

    /// Number of factors.
    #[arg(long, default_value_t = 3)]
    pub n: usize,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Oracle seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Emit JSON lines instead of text.
    #[arg(long)]
    pub json: bool,

    /// Permit n above 5.
    #[arg(long)]
    pub allow_large_n: bool,

    /// Oracle trials per identity.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,

    /// Write the expanded Q_ij and total reduced Casimir to this directory.
    #[arg(long, value_name = "DIR")]
    pub emit: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, ConfigError> {
        let jobs = self
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1));
        let config = RunConfig {
            suites: expand(&self.suites),
            n: self.n,
            jobs,
            seed: self.seed,
            output: if self.json { OutputFormat::Json } else { OutputFormat::Text },
            allow_large_n: self.allow_large_n,
            trials: self.trials,
            emit: self.emit,
        };
        config.validate()?;
        Ok(config)
    }
}
