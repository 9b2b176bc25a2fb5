//! Batch-evaluation helpers behind the `parallel` feature.
//!
//! With `parallel` enabled (the default) the `map_*` functions fan work out
//! over rayon's global pool; without it they run in place. Results are
//! collected in input order and all reductions downstream happen
//! sequentially, so both modes produce bit-identical output. The `*_seq`
//! twins are always sequential; the bench suite uses them as the baseline.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every item, preserving order.
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`map_collect`].
pub fn map_collect_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Applies `f` to every integer in `lo..=hi`, preserving order.
pub fn map_range<R, F>(lo: u64, hi: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..=hi).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..=hi).map(f).collect()
    }
}

/// Sequential twin of [`map_range`].
pub fn map_range_seq<R, F>(lo: u64, hi: u64, f: F) -> Vec<R>
where
    F: Fn(u64) -> R,
{
    (lo..=hi).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let items: Vec<u64> = (0..1000).collect();
        let f = |n: &u64| (*n as f64).sqrt().sin();
        assert_eq!(map_collect(&items, f), map_collect_seq(&items, f));
        let g = |n: u64| 1.0 / (n as f64 + 1.0);
        assert_eq!(map_range(1, 500, g), map_range_seq(1, 500, g));
    }

    #[test]
    fn empty_range_yields_nothing() {
        let v: Vec<u64> = map_range(5, 4, |n| n);
        assert!(v.is_empty());
    }
}
