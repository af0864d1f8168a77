use rayon::ThreadPoolBuilder;

use crate::error::{Error, Result};

/// Runs `f` on a dedicated pool of `workers` threads (0 means rayon's
/// default). Parallel code in this crate merges results in a fixed order, so
/// the worker count never changes the output.
pub fn with_workers<T, F>(workers: usize, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let pool = ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}
