use std::collections::BTreeSet;
use std::path::PathBuf;

/// Largest `n` accepted without `allow_large_n`.
pub const MAX_DEFAULT_N: usize = 5;

/// Verification suites, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    O2n,
    Su11,
    Howe,
    Racah,
    Reduction,
    Oracle,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 6] =
        [Suite::O2n, Suite::Su11, Suite::Howe, Suite::Racah, Suite::Reduction, Suite::Oracle];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("n must be at least 3, got {0}")]
    NTooSmall(usize),
    #[error("n = {0} exceeds {MAX_DEFAULT_N}; pass --allow-large-n to run it anyway")]
    NTooLarge(usize),
    #[error("jobs must be at least 1")]
    ZeroJobs,
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("no suite selected")]
    NoSuites,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Concrete suites; `All` is expanded on construction.
    pub suites: BTreeSet<Suite>,
    pub n: usize,
    pub jobs: usize,
    pub seed: u64,
    pub output: OutputFormat,
    pub allow_large_n: bool,
    /// Oracle trials per identity, and composition trials per algebra.
    pub trials: usize,
    /// Directory for the expanded reduced operators.
    pub emit: Option<PathBuf>,
}

impl RunConfig {
    /// Every suite at `n`, one worker, seed 0, text output, 100 trials.
    pub fn new(n: usize) -> Self {
        RunConfig {
            suites: Suite::CONCRETE.into_iter().collect(),
            n,
            jobs: 1,
            seed: 0,
            output: OutputFormat::Text,
            allow_large_n: false,
            trials: 100,
            emit: None,
        }
    }

    pub fn with_suites(mut self, suites: &[Suite]) -> Self {
        self.suites = expand(suites);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 3 {
            return Err(ConfigError::NTooSmall(self.n));
        }
        if self.n > MAX_DEFAULT_N && !self.allow_large_n {
            return Err(ConfigError::NTooLarge(self.n));
        }
        if self.jobs == 0 {
            return Err(ConfigError::ZeroJobs);
        }
        if self.trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        if self.suites.is_empty() {
            return Err(ConfigError::NoSuites);
        }
        Ok(())
    }

    pub fn runs(&self, suite: Suite) -> bool {
        self.suites.contains(&suite)
    }
}

pub fn expand(suites: &[Suite]) -> BTreeSet<Suite> {
    if suites.contains(&Suite::All) {
        Suite::CONCRETE.into_iter().collect()
    } else {
        suites.iter().copied().collect()
    }
}
