//! Event-level data parallelism.
//!
//! With the `parallel` feature (default) work is spread with rayon; without it
//! everything runs on the calling thread. Results come back in index order
//! either way, so downstream merging is independent of scheduling.

/// Maps `f` over `0..n`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_indexed_sequential(n, f)
}

/// Single-threaded reference path, always available.
pub fn map_indexed_sequential<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..n).map(f).collect()
}

/// Runs `f` with at most `threads` workers. `None` keeps the global pool.
#[cfg(feature = "parallel")]
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<T: Send>(_threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let v = with_threads(Some(4), || map_indexed(1000, |i| i * i));
        assert_eq!(v, map_indexed_sequential(1000, |i| i * i));
    }
}
