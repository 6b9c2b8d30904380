//! Small combinatorial helpers shared across the crate.

/// Binomial coefficient `C(n, k)` in `u64`, saturating-free for desk-scale
/// inputs (callers stay far below overflow).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `C(n, 2)` as a usize; the number of edges of `K_n`.
pub fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Rank of the pair `(i, j)` with `i < j` among all pairs of `0..n` in
/// lexicographic order: (0,1), (0,2), ..., (0,n-1), (1,2), ...
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    debug_assert!(idx < choose2(n));
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
        i += 1;
    }
}

/// All pairs `(i, j)` with `i < j < n` in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(12, 2), 66);
        assert_eq!(binomial(16, 2), 120);
        assert_eq!(binomial(30, 2), 435);
        assert_eq!(binomial(6, 7), 0);
    }

    #[test]
    fn pair_index_roundtrip() {
        for n in 2..12 {
            for (rank, (i, j)) in pairs(n).enumerate() {
                assert_eq!(pair_index(n, i, j), rank);
                assert_eq!(pair_from_index(n, rank), (i, j));
            }
            assert_eq!(pairs(n).count(), choose2(n));
        }
    }
}
