//! Replicate-level execution: data-parallel with rayon under the `parallel`
//! feature (default), plain loops otherwise. Results are collected in index
//! order, so parallel and serial runs agree bit for bit; aggregation
//! downstream is always a deterministic fold over the collected vector.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..count`, in parallel when the `parallel` feature is on.
/// Output order is by index regardless of scheduling.
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_serial(count, f)
    }
}

/// Always-sequential variant, kept available for fallback comparisons and
/// the benchmark suite.
pub fn map_indexed_serial<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_serial_agree_bitwise() {
        let f = |i: usize| {
            let mut acc = 0u64;
            let mut x = i as u64 ^ 0x9E3779B97F4A7C15;
            for _ in 0..100 {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                acc ^= x;
            }
            acc as f64 / u64::MAX as f64
        };
        let a = map_indexed(257, f);
        let b = map_indexed_serial(257, f);
        assert_eq!(a, b);
    }
}
