//! Subset enumeration by cardinality, then lexicographically.

/// Calls `f` on every `k`-subset of `0..n` (as sorted index slices) in
/// lexicographic order until it returns `Some`.
pub fn find_combination<T>(
    n: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(found) = f(&idx) {
            return Some(found);
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Calls `f` on every subset of `0..n`, smallest cardinality first, until it
/// returns `Some`.
pub fn find_subset<T>(n: usize, mut f: impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    (0..=n).find_map(|k| find_combination(n, k, &mut f))
}

/// Every subset of `0..n` in cardinality-then-lexicographic order.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << n.min(20));
    find_subset::<()>(n, |s| {
        out.push(s.to_vec());
        None
    });
    out
}
