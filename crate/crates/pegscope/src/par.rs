//! Rayon executor for the finder stages, sized by `PEGSCOPE_THREADS`.

use pegscope_core::finder::ParMap;
use rayon::prelude::*;

pub const THREADS_VAR: &str = "PEGSCOPE_THREADS";

/// Order-preserving parallel map on the current rayon pool.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rayon;

impl ParMap for Rayon {
    fn map_collect<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// Thread count from `PEGSCOPE_THREADS`; `None` when unset, empty or not a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Run `f` on a dedicated pool of `threads` workers (machine parallelism when `None`).
pub fn with_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    match b.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
