use rayon::prelude::*;

use crate::error::Result;
use crate::rng::RngStream;

/// Runs `f` on substreams `0..n` of `stream`, in parallel, returning results
/// in index order. The output does not depend on the thread count.
pub fn replicate<T, F>(n: usize, stream: RngStream, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RngStream) -> Result<T> + Sync + Send,
{
    (0..n as u64)
        .into_par_iter()
        .map(|i| f(stream.substream(i)))
        .collect()
}
