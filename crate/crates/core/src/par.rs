//! Data-parallel trial driver. With the `parallel` feature (default) trials
//! run on a rayon pool sized by the worker count; without it, or with one
//! worker, they run sequentially. Results always come back in trial order.

/// Map `f` over `0..n`, in parallel when available and asked for.
pub fn map_indexed<T, F>(n: usize, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers == Some(1) || n <= 1 {
        return (0..n).map(f).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match workers {
            Some(w) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(w)
                    .build()
                    .expect("worker pool");
                pool.install(|| (0..n).into_par_iter().map(f).collect())
            }
            None => (0..n).into_par_iter().map(f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Explicit sequential driver, kept available in all configurations for
/// benchmarks that compare both paths.
pub fn map_indexed_sequential<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let out = map_indexed(100, None, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
        let seq = map_indexed_sequential(100, |i| i * i);
        assert_eq!(out, seq);
    }
}
