//! Parallel map helpers with an order-stable sequential fallback.
//!
//! All data parallelism in the crate flows through these functions. Maps
//! preserve input order, and every numeric reduction downstream runs
//! sequentially over the ordered output (pairwise where accuracy matters),
//! so enabling or disabling the `parallel` feature, or changing the rayon
//! pool size, cannot change any computed bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Ordered map over a slice.
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
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

/// Ordered map over an index range `0..count`.
pub fn map_index<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Pairwise (cascade) summation.
///
/// The reduction tree depends only on the slice length, so the result is a
/// pure function of the input values; round-off grows like `O(log n)` rather
/// than `O(n)`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `log Σ exp(x_i)` computed without overflow.
///
/// `-inf` entries contribute nothing; an all-`-inf` (or empty) input returns
/// `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return f64::NEG_INFINITY;
    }
    let shifted: Vec<f64> = xs.iter().map(|&x| (x - m).exp()).collect();
    m + pairwise_sum(&shifted).ln()
}
