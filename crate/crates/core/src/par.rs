//! Index-ordered sample evaluation, parallel when the `parallel` feature is on.
//!
//! Results always come back in index order so reductions downstream are
//! deterministic regardless of the strategy.

use crate::error::Result;

/// Evaluate `f(0..n)` and collect in index order, stopping at the first error
/// by index.
pub fn try_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        parallel::try_map(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sequential::try_map(n, f)
    }
}

pub mod sequential {
    use crate::error::Result;

    pub fn try_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
    where
        F: Fn(usize) -> Result<T>,
    {
        (0..n).map(f).collect()
    }
}

#[cfg(feature = "parallel")]
pub mod parallel {
    use rayon::prelude::*;

    use crate::error::Result;

    pub fn try_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        // Collect every outcome first so that the reported error is the one
        // with the smallest index, as in the sequential path.
        let all: Vec<Result<T>> = (0..n).into_par_iter().map(f).collect();
        all.into_iter().collect()
    }
}

/// `n` cell-centred points of `[a, b]`: `a + (i + 1/2)(b - a)/n`.
pub fn cell_centers(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..n).map(|i| a + (i as f64 + 0.5) * h).collect()
}

/// `n >= 2` evenly spaced points including both ends.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
        .collect()
}
