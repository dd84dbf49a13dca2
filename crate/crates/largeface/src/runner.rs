//! Replicate-level parallelism. Replicate `i` always draws from stream
//! `(seed, i)` and results come back in index order, so the output does not
//! depend on the number of threads.

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{RunError, RunResult};

pub struct Runner {
    pool: ThreadPool,
}

impl Runner {
    /// `None` uses every available core.
    pub fn new(threads: Option<usize>) -> RunResult<Self> {
        let mut b = ThreadPoolBuilder::new();
        if let Some(t) = threads {
            if t == 0 {
                return Err(RunError::config("--threads must be positive"));
            }
            b = b.num_threads(t);
        }
        let pool = b.build().map_err(|e| RunError::config(format!("thread pool: {e}")))?;
        Ok(Runner { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// `f(0), …, f(m-1)` in order.
    pub fn map<T, F>(&self, m: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.pool.install(|| (0..m).into_par_iter().map(&f).collect())
    }

    /// Like [`map`](Self::map); on failure returns the error of the lowest
    /// failing index.
    pub fn try_map<T, E, F>(&self, m: u64, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(u64) -> Result<T, E> + Sync + Send,
    {
        self.map(m, f).into_iter().collect()
    }
}
