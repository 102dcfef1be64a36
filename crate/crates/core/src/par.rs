//! Deterministic range partitioning for exhaustive scans.
//!
//! Work over `[0, total)` is cut into fixed chunks; partial results are
//! combined in chunk order, so the outcome never depends on the number of
//! worker threads.

const CHUNK: u64 = 1 << 10;

/// Maps every chunk `[lo, hi)` of `[0, total)` and folds the results in
/// chunk order.
pub fn map_reduce<T, M, R>(total: u64, map: M, identity: T, reduce: R) -> T
where
    T: Send + Clone,
    M: Fn(u64, u64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let chunks = total.div_ceil(CHUNK);
    let run = |i: u64| map(i * CHUNK, ((i + 1) * CHUNK).min(total));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let parts: Vec<T> = (0..chunks).into_par_iter().map(run).collect();
        parts.into_iter().fold(identity, reduce)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(run).fold(identity, reduce)
    }
}

/// Parallel `all` over `[0, total)`.
pub fn all<P>(total: u64, pred: P) -> bool
where
    P: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..total).into_par_iter().all(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..total).all(pred)
    }
}

/// Parallel ordered map over a slice.
pub fn map_slice<A, B, F>(items: &[A], f: F) -> Vec<B>
where
    A: Sync,
    B: Send,
    F: Fn(&A) -> B + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_match_sequential() {
        let total = 10_000u64;
        let s = map_reduce(total, |lo, hi| (lo..hi).sum::<u64>(), 0, |a, b| a + b);
        assert_eq!(s, total * (total - 1) / 2);
        assert_eq!(map_reduce(0, |_, _| 1u64, 0, |a, b| a + b), 0);
        assert!(all(100, |i| i < 100));
        assert_eq!(map_slice(&[1, 2, 3], |x| x * 2), vec![2, 4, 6]);
    }
}
