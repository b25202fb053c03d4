//! Range-minimum queries over a sample array.
//!
//! Sparse table: O(n log n) build, O(1) query, queries over inclusive
//! sample ranges. Built once per path and shared read-only.

#[derive(Debug, Clone)]
pub struct SparseTable {
    len: usize,
    // rows[k][i] = min over [i, i + 2^k - 1]
    rows: Vec<Vec<f64>>,
}

impl SparseTable {
    pub fn new(values: &[f64]) -> Self {
        let len = values.len();
        assert!(len > 0, "sparse table over empty array");
        let levels = usize::BITS as usize - (len.leading_zeros() as usize);
        let mut rows = Vec::with_capacity(levels);
        rows.push(values.to_vec());
        let mut k = 1;
        while (1usize << k) <= len {
            let half = 1usize << (k - 1);
            let prev = &rows[k - 1];
            let row: Vec<f64> = (0..=len - (1 << k))
                .map(|i| prev[i].min(prev[i + half]))
                .collect();
            rows.push(row);
            k += 1;
        }
        SparseTable { len, rows }
    }

    /// Minimum over the inclusive index range `[a, b]`.
    pub fn min(&self, a: usize, b: usize) -> f64 {
        assert!(a <= b && b < self.len, "bad rmq range [{a}, {b}]");
        let span = b - a + 1;
        let k = usize::BITS as usize - 1 - span.leading_zeros() as usize;
        self.rows[k][a].min(self.rows[k][b + 1 - (1 << k)])
    }
}
