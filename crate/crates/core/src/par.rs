//! Data-parallel helpers. With the `parallel` feature (default) these fan
//! out over rayon; without it they run the same loops sequentially.
//!
//! Every helper is deterministic: reductions use total orders that do not
//! depend on chunking, so parallel and sequential runs produce identical
//! results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Argmax of `score` over `candidates`, ties broken toward the lowest index.
/// `parallel` requests a rayon scan; it is ignored when the feature is off.
pub(crate) fn argmax_scored<F>(candidates: &[usize], score: F, parallel: bool) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return candidates
            .par_iter()
            .map(|&j| (j, score(j)))
            .reduce_with(pick_better);
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    candidates
        .iter()
        .map(|&j| (j, score(j)))
        .fold(None, |best, cur| match best {
            None => Some(cur),
            Some(b) => Some(pick_better(b, cur)),
        })
}

/// Total order on (index, score): higher score wins, equal scores go to the
/// lower index. Associative and commutative, so any reduction tree agrees.
fn pick_better(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Maps `f` over `0..n` collecting results in index order.
pub(crate) fn map_indexed<T, F>(n: usize, f: F, parallel: bool) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    (0..n).map(f).collect()
}

/// Runs `f` on consecutive row blocks of a dense `rows x width` buffer.
/// `f(first_row, block)` receives the starting row index of each block.
pub(crate) fn for_each_row_block<F>(data: &mut [f64], width: usize, block_rows: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let chunk = block_rows * width;
    #[cfg(feature = "parallel")]
    {
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(b, rows)| f(b * block_rows, rows));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(chunk)
            .enumerate()
            .for_each(|(b, rows)| f(b * block_rows, rows));
    }
}
