//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the helpers dispatch onto the
//! current rayon pool. Without it, or with [`Execution::Sequential`], they run
//! on the calling thread. Every helper preserves output order and combines
//! partial results in a fixed order, so floating-point results do not depend
//! on the number of worker threads.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to schedule independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0..n)` and returns the results in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Applies `f(chunk_index, chunk)` to consecutive `chunk_len`-sized pieces of
/// `data`.
pub fn for_each_chunk_mut<T, F>(exec: Execution, data: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        data.par_chunks_mut(chunk_len).enumerate().for_each(|(k, c)| f(k, c));
        return;
    }
    let _ = exec;
    data.chunks_mut(chunk_len).enumerate().for_each(|(k, c)| f(k, c));
}

/// Applies `f(chunk_index, lo_chunk, hi_chunk)` to matching `chunk_len`-sized
/// pieces of two equally long slices.
pub fn for_each_zipped_chunk_mut<T, F>(exec: Execution, lo: &mut [T], hi: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T], &mut [T]) + Sync + Send,
{
    debug_assert_eq!(lo.len(), hi.len());
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        lo.par_chunks_mut(chunk_len)
            .zip(hi.par_chunks_mut(chunk_len))
            .enumerate()
            .for_each(|(k, (a, b))| f(k, a, b));
        return;
    }
    let _ = exec;
    lo.chunks_mut(chunk_len)
        .zip(hi.chunks_mut(chunk_len))
        .enumerate()
        .for_each(|(k, (a, b))| f(k, a, b));
}

/// Splits `0..n` into fixed blocks of `block` indices, evaluates `f` on each
/// block, and folds the partials left to right with `combine`.
pub fn blocked_sum<T, F, C>(exec: Execution, n: usize, block: usize, f: F, zero: T, combine: C) -> T
where
    T: Send + Copy,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
    C: Fn(T, T) -> T,
{
    let block = block.max(1);
    let blocks = n.div_ceil(block);
    let partials = map_indexed(exec, blocks, |b| {
        let lo = b * block;
        f(lo..(lo + block).min(n))
    });
    partials.into_iter().fold(zero, combine)
}

/// Runs `body` on a dedicated pool of `threads` workers (or the global pool
/// when `threads` is `None`).
pub fn with_threads<R: Send>(threads: Option<usize>, body: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            return pool.install(body);
        }
    }
    let _ = threads;
    body()
}
