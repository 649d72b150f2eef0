//! Per-file data parallelism. Results always come back in input order, so
//! callers aggregate deterministically whichever path runs.

/// Maps `f` over `items` one at a time.
pub fn map_sequential<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Maps `f` over `items` on the rayon pool. Without the `parallel`
/// feature this is [`map_sequential`].
#[cfg(feature = "parallel")]
pub fn map_parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    map_sequential(items, f)
}

pub fn map<T: Sync, R: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    if parallel {
        map_parallel(items, f)
    } else {
        map_sequential(items, f)
    }
}

pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}
