use std::time::Instant;

use racah_core::Runner;
use rayon::prelude::*;

/// Fixed-size rayon pool. Output order always matches input order.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    pub fn new(jobs: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
        Ok(Parallel { pool })
    }

    pub fn jobs(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Runner for Parallel {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }

    fn timed<R>(&self, f: impl FnOnce() -> R) -> (R, f64) {
        let start = Instant::now();
        let r = f();
        (r, start.elapsed().as_secs_f64() * 1e3)
    }
}
